import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from qcloseness import cli, textio
from qcloseness.errors import FormatError
from qcloseness.extremal import c_min, minimal_ensemble
from qcloseness.nogo import DecayCurve, SpanningCertificate
from qcloseness.povm import comparison_povm, R2, validate_povm
from qcloseness.states import haar_ensemble


class TestEnsembleFormat:
    def test_round_trip_exact(self):
        e = haar_ensemble(5, 3, 17)
        back = textio.parse_ensemble(textio.format_ensemble(e, comment="seed=17"))
        np.testing.assert_array_equal(back.as_array(), e.as_array())

    def test_layout(self):
        text = textio.format_ensemble(minimal_ensemble(2, 2))
        assert text.splitlines() == ["2 2", "1 0 0 0", "0 0 1 0"]

    def test_comments_and_blanks(self):
        e = textio.parse_ensemble("# header\n\n2 2\n# first\n1 0 0 0\n  0 0 0 2\n")
        np.testing.assert_allclose(e.as_array(), [[1, 0], [0, 1j]])

    @pytest.mark.parametrize(
        "text, lineno",
        [
            ("2 2\n", 1),
            ("hello\n", 1),
            ("2 2\n1 0 0 0\n1 0 0\n", 3),
            ("2 2\n1 0 0 0\n0 0 0 0\n", 3),
            ("2 2\n1 0 x 0\n0 0 1 0\n", 2),
            ("# c\n2 2\n1 0 0 0\n0 0 1 0\n1 0 0 0\n", 5),
            ("1 2\n1 0 0 0\n", 1),
            ("", 1),
        ],
    )
    def test_malformed(self, text, lineno):
        with pytest.raises(FormatError) as info:
            textio.parse_ensemble(text)
        assert info.value.lineno == lineno
        assert f"line {lineno}" in str(info.value)


class TestOperatorFormat:
    def test_round_trip(self):
        op = comparison_povm(2, 2)[R2]
        back = textio.parse_operator(textio.format_operator(op))
        np.testing.assert_array_equal(back.matrix, op.matrix)
        assert (back.n, back.dim) == (2, 2)

    def test_short(self):
        with pytest.raises(FormatError):
            textio.parse_operator("2 2\n" + " ".join(["0"] * 8) + "\n")


class TestReports:
    def test_decay_curve_lines(self):
        text = textio.report_csv(DecayCurve("S2", ((1, 3), (2, 2), (3, 1)), 1))
        assert text.splitlines() == ["sample_count,nullspace_dim", "1,3", "2,2", "3,1"]

    def test_certificate_single_row(self):
        cert = SpanningCertificate(2, 2, 0.5, 0.25, 1 / 3, 1.0, 4, True, 0.0)
        rows = list(csv.reader(io.StringIO(textio.report_csv(cert))))
        assert rows == [list(SpanningCertificate.CSV_HEADER),
                        ["2", "2", "0.5", "0.25", "0.33333333333333331", "4", "true", "0"]]
        assert float(rows[1][4]) == 1 / 3

    def test_validation_rows(self):
        text = textio.report_csv(validate_povm(comparison_povm(2, 2)))
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["element_label", "min_eigenvalue", "hermiticity_residue", "completeness_residue"]
        assert [r[0] for r in rows[1:]] == ["R2", "R?"]

    def test_atomic_overwrite(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("old contents that are longer\n")
        textio.emit_report(DecayCurve("S2", ((1, 0),), 1), path)
        assert path.read_text() == "sample_count,nullspace_dim\n1,0\n"
        assert [p.name for p in tmp_path.iterdir()] == ["r.csv"]


def run_cli(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


class TestCli:
    def test_cmin(self, capsys):
        assert run_cli(["cmin", "--n", "3", "--d", "2"], capsys)[:2] == (0, "0.25\n")

    def test_round_trip_minimal(self, tmp_path, capsys):
        path = tmp_path / "e.txt"
        assert run_cli(["minimal", "--n", "4", "--d", "2", "--output", str(path)], capsys)[0] == 0
        code, out, _ = run_cli(["closeness", "--input", str(path)], capsys)
        assert code == 0
        assert abs(float(out.strip()) - c_min(4, 2)) <= 1e-12

    def test_witness_csv(self, tmp_path, capsys):
        path = tmp_path / "cert.csv"
        code, out, _ = run_cli(["witness", "--n", "2", "--d", "2", "--threshold", "0.5", "--seed", "1",
                                "--output", str(path)], capsys)
        assert code == 0
        assert "seed=1" in out
        rows = list(csv.DictReader(path.open()))
        assert len(rows) == 1 and rows[0]["verdict"] == "true"

    def test_witness_stdout_is_pure_csv(self, capsys):
        code, out, err = run_cli(["witness", "--n", "2", "--d", "2", "--threshold", "0.9"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "n,d,A,epsilon,sigma_min,rank,verdict,residual"
        assert "seed=1" in err

    def test_malformed_input(self, tmp_path, capsys):
        bad = tmp_path / "bad_file.txt"
        bad.write_text("2 2\n")
        code, _, err = run_cli(["closeness", "--input", str(bad)], capsys)
        assert code == 1
        assert "line 1" in err

    def test_missing_file(self, tmp_path, capsys):
        assert run_cli(["closeness", "--input", str(tmp_path / "nope")], capsys)[0] == 1

    def test_usage_error_is_exit_1(self, capsys):
        assert run_cli(["cmin", "--n", "three", "--d", "2"], capsys)[0] == 1
        assert run_cli(["frobnicate"], capsys)[0] == 1

    def test_threshold_out_of_range(self, capsys):
        assert run_cli(["witness", "--n", "3", "--d", "2", "--threshold", "0.1"], capsys)[0] == 1

    def test_numerical_failure_is_exit_2(self, capsys):
        code, _, err = run_cli(["witness", "--n", "2", "--d", "2", "--threshold", "0"], capsys)
        assert code == 2
        assert "could not sample" in err

    def test_size_cap_is_exit_2(self, capsys):
        assert run_cli(["compare", "--n", "7", "--d", "2"], capsys)[0] == 2

    def test_bad_epsilon_is_exit_1(self, capsys):
        assert run_cli(["witness", "--n", "2", "--d", "2", "--threshold", "0.5", "--epsilon", "5"], capsys)[0] == 1

    def test_unwritable_output(self, tmp_path, capsys):
        code = run_cli(["nullspace-decay", "--n", "2", "--d", "2", "--threshold", "0.5", "--samples", "3",
                        "--output", str(tmp_path / "missing" / "x.csv")], capsys)[0]
        assert code == 2

    def test_nullspace_decay(self, tmp_path, capsys):
        path = tmp_path / "curve.csv"
        code, _, _ = run_cli(["nullspace-decay", "--n", "2", "--d", "2", "--threshold", "1", "--side", "s1",
                              "--samples", "20", "--output", str(path)], capsys)
        assert code == 0
        lines = path.read_text().splitlines()
        assert len(lines) == 21 and lines[-1] == "20,1"

    def test_compare_with_input(self, tmp_path, capsys):
        path = tmp_path / "pair.txt"
        path.write_text("2 2\n1 0 0 0\n0 0 1 0\n")
        code, out, _ = run_cli(["compare", "--n", "2", "--d", "2", "--input", str(path)], capsys)
        assert code == 0
        assert "P(R2)=0.5" in out and "valid=true" in out

    def test_validate_povm_files(self, tmp_path, capsys):
        p = comparison_povm(2, 2)
        files = []
        for label, op in p:
            f = tmp_path / f"{'inconclusive' if label == 'R?' else label}.txt"
            f.write_text(textio.format_operator(op))
            files.append(str(f))
        code, out, _ = run_cli(["validate-povm", "--input", *files], capsys)
        assert code == 0
        assert out.splitlines()[1].startswith("R2,")
        code, _, _ = run_cli(["validate-povm", "--input", files[0]], capsys)
        assert code == 1

    def test_module_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "qcloseness", "cmin", "--n", "5", "--d", "3"],
                             capture_output=True, text=True, check=True)
        assert res.stdout == "0.16666666666666666\n"
