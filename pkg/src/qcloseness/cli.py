"""Command-line front end.

Exit codes: 0 success, 1 bad input or failed validation, 2 numerical
infeasibility (epsilon search, region sampling, size cap) or write failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import extremal, nogo, povm, textio
from .errors import InputError, NumericalFailure
from .states import closeness, threshold_predicate

COMMANDS = ("closeness", "cmin", "minimal", "witness", "compare", "nullspace-decay", "validate-povm")


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    d: int | None = None
    threshold: float | None = None
    epsilon: float | None = None
    samples: int = 200
    seed: int = 1
    side: str = "s2"
    tolerance: float | None = None
    input_paths: list = field(default_factory=list)
    output_path: str | None = None

    @property
    def input_path(self):
        return self.input_paths[0] if self.input_paths else None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcloseness", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, *, nd=False, threshold=False, seed=False, inputs=None, output=True):
        p = sub.add_parser(name, help=help)
        if nd:
            p.add_argument("--n", type=int, required=nd == "required")
            p.add_argument("--d", type=int, required=nd == "required")
        if threshold:
            p.add_argument("--threshold", type=float, required=threshold == "required")
        if seed:
            p.add_argument("--seed", type=int, default=1)
        if inputs == "one":
            p.add_argument("--input", dest="input_paths", action="append", default=[])
        elif inputs == "many":
            p.add_argument("--input", dest="input_paths", nargs="+", default=[])
        if output:
            p.add_argument("--output")
        p.add_argument("--tolerance", type=float)
        return p

    add("closeness", "closeness of an ensemble file", threshold=True, inputs="one", output=False)
    add("cmin", "minimal closeness for n states in dimension d", nd="required", output=False)
    add("minimal", "write an ensemble attaining c_min", nd="required")
    w = add("witness", "spanning certificate for a perturbed family", nd="required", threshold="required", seed=True)
    w.add_argument("--epsilon", type=float)
    w.add_argument("--side", choices=("s1", "s2"), default="s2")
    add("compare", "symmetric-subspace comparison measurement (threshold 1)", nd="required", inputs="one")
    nd = add("nullspace-decay", "span growth of sampled product states", nd="required",
             threshold="required", seed=True)
    nd.add_argument("--samples", type=int, default=200)
    nd.add_argument("--side", choices=("s1", "s2"), default="s2")
    add("validate-povm", "check operator files (or the comparison POVM) form a POVM", nd=True, inputs="many")
    return parser


def parse_config(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    cfg = RunConfig(command=ns.pop("command"))
    for key, value in ns.items():
        setattr(cfg, key if key != "output" else "output_path", value)
    return cfg


def _emit(artifact, cfg: RunConfig):
    if cfg.output_path:
        try:
            textio.emit_report(artifact, cfg.output_path)
        except OSError as exc:
            raise _WriteError(str(exc)) from None
    else:
        sys.stdout.write(textio.report_csv(artifact))


def _write_text(text, path):
    if path:
        try:
            textio.atomic_write(path, text)
        except OSError as exc:
            raise _WriteError(str(exc)) from None
    else:
        sys.stdout.write(text)


class _WriteError(Exception):
    pass


def _summary(cfg, line):
    # keep stdout clean for CSV when no output file is given
    print(line, file=sys.stdout if cfg.output_path else sys.stderr)


def _check_positive(cfg, *names):
    for name in names:
        value = getattr(cfg, name)
        if value is None or value < (2 if name in ("n", "d") else 1):
            raise InputError(f"--{name} must be given and >= {2 if name in ('n', 'd') else 1}")


def _closeness(cfg):
    if len(cfg.input_paths) != 1:
        raise InputError("closeness needs exactly one --input file")
    e = textio.read_ensemble(cfg.input_path)
    c = closeness(e)
    print(textio.fmt(c))
    if cfg.threshold is not None:
        print(f"C >= A ({textio.fmt(cfg.threshold)}): {textio.fmt(threshold_predicate(e, cfg.threshold))}")
    return 0


def _cmin(cfg):
    print(textio.fmt(extremal.c_min(cfg.n, cfg.d)))
    return 0


def _minimal(cfg):
    _check_positive(cfg, "n", "d")
    e = extremal.minimal_ensemble(cfg.n, cfg.d)
    _write_text(textio.format_ensemble(e, comment=f"minimal-closeness ensemble n={cfg.n} d={cfg.d}"), cfg.output_path)
    if cfg.output_path:
        print(f"wrote n={cfg.n} d={cfg.d} closeness={textio.fmt(closeness(e))} to {cfg.output_path}")
    return 0


def _witness(cfg):
    _check_positive(cfg, "n", "d")
    kw = {} if cfg.tolerance is None else {"rtol": cfg.tolerance}
    fam, cert = nogo.witness(cfg.n, cfg.d, cfg.threshold, side=cfg.side, seed=cfg.seed, epsilon=cfg.epsilon, **kw)
    _emit(cert, cfg)
    _summary(cfg, f"witness n={cert.n} d={cert.d} A={textio.fmt(cert.threshold)} side={fam.side} seed={cfg.seed} "
                  f"epsilon={textio.fmt(cert.epsilon)} rank={cert.rank}/{cert.d ** cert.n} "
                  f"verdict={textio.fmt(cert.verdict)} residual={textio.fmt(cert.residual)}")
    return 0


def _compare(cfg):
    _check_positive(cfg, "n", "d")
    p = povm.comparison_povm(cfg.n, cfg.d)
    report = povm.validate_povm(p)
    if cfg.output_path:
        _write_text(textio.format_operator(p[povm.R2]), cfg.output_path)
    line = f"comparison POVM n={cfg.n} d={cfg.d} valid={textio.fmt(report.passed)}"
    if cfg.input_paths:
        e = textio.read_ensemble(cfg.input_path)
        if (e.n, e.dim) != (cfg.n, cfg.d):
            raise InputError(f"ensemble is n={e.n}, d={e.dim} but --n {cfg.n} --d {cfg.d} was given")
        s = povm.kron_state(e.states)
        probs = p.probabilities(s)
        line += " " + " ".join(f"P({k})={textio.fmt(v)}" for k, v in probs.items())
    print(line)
    return 0


def _nullspace_decay(cfg):
    _check_positive(cfg, "n", "d", "samples")
    kw = {} if cfg.tolerance is None else {"tol": cfg.tolerance}
    curve = nogo.nullspace_decay(cfg.n, cfg.d, cfg.threshold, cfg.side, cfg.samples, seed=cfg.seed, **kw)
    _emit(curve, cfg)
    _summary(cfg, f"nullspace-decay n={cfg.n} d={cfg.d} A={textio.fmt(cfg.threshold)} side={curve.side} "
                  f"seed={cfg.seed} samples={cfg.samples} final_dim={curve.final_dimension}")
    return 0


def _validate_povm(cfg):
    if cfg.input_paths:
        ops = {Path(p).stem: textio.read_operator(p) for p in cfg.input_paths}
        p = povm.Povm(ops)
    else:
        _check_positive(cfg, "n", "d")
        p = povm.comparison_povm(cfg.n, cfg.d)
    kw = {} if cfg.tolerance is None else {"completeness_atol": cfg.tolerance}
    report = povm.validate_povm(p, **kw)
    _emit(report, cfg)
    _summary(cfg, f"validate-povm elements={len(p)} completeness_residue={textio.fmt(report.completeness_residue)} "
                  f"{'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


_DISPATCH = {
    "closeness": _closeness,
    "cmin": _cmin,
    "minimal": _minimal,
    "witness": _witness,
    "compare": _compare,
    "nullspace-decay": _nullspace_decay,
    "validate-povm": _validate_povm,
}


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        return _DISPATCH[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except _WriteError as exc:
        print(f"write failed: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
