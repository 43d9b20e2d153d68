"""Plain-text ensemble and operator files, and CSV reports.

Ensemble file::

    # comment lines start with '#'
    n d
    re_0 im_0 re_1 im_1 ...     (one line per state, 2*d numbers)

Operator file: first line ``n d``, then ``d**n`` rows of ``2 * d**n`` numbers
(row-major, real/imaginary interleaved).

Every float is written with 17 significant digits, which round-trips IEEE
doubles exactly.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError, InputError
from .nogo import DecayCurve, SpanningCertificate
from .povm import CompositeOperator, ValidationReport
from .states import StateEnsemble, make_state

CSV_VALIDATION_HEADER = ("element_label", "min_eigenvalue", "hermiticity_residue", "completeness_residue")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _interleave(v) -> str:
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return " ".join(fmt(float(x)) for x in out)


def _content_lines(text: str):
    """``(lineno, fields)`` for non-blank, non-comment lines."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, stripped.split()


def _header(lines, what):
    try:
        lineno, fields = next(lines)
    except StopIteration:
        raise FormatError(f"empty {what} file: missing 'n d' header", 1) from None
    if len(fields) != 2:
        raise FormatError(f"header must be two integers 'n d', got {' '.join(fields)!r}", lineno)
    try:
        n, d = int(fields[0]), int(fields[1])
    except ValueError:
        raise FormatError(f"header must be two integers 'n d', got {' '.join(fields)!r}", lineno) from None
    if n < 2 or d < 2:
        raise FormatError(f"need n >= 2 and d >= 2, got n={n}, d={d}", lineno)
    return lineno, n, d


def _complex_row(fields, width, lineno):
    if len(fields) != 2 * width:
        raise FormatError(f"expected {2 * width} numbers, got {len(fields)}", lineno)
    try:
        x = np.array([float(f) for f in fields])
    except ValueError as exc:
        raise FormatError(str(exc), lineno) from None
    return x[0::2] + 1j * x[1::2]


def format_ensemble(e: StateEnsemble, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{e.n} {e.dim}")
    lines.extend(_interleave(s.amplitudes) for s in e)
    return "\n".join(lines) + "\n"


def parse_ensemble(text: str) -> StateEnsemble:
    lines = _content_lines(text)
    head, n, d = _header(lines, "ensemble")
    states = []
    last = head
    for lineno, fields in lines:
        if len(states) == n:
            raise FormatError(f"more than the declared {n} state lines", lineno)
        try:
            states.append(make_state(_complex_row(fields, d, lineno)))
        except FormatError:
            raise
        except InputError as exc:
            raise FormatError(str(exc), lineno) from None
        last = lineno
    if len(states) < n:
        raise FormatError(f"header declares {n} states but only {len(states)} follow", last)
    return StateEnsemble(tuple(states))


def format_operator(op: CompositeOperator) -> str:
    lines = [f"{op.n} {op.dim}"]
    lines.extend(_interleave(row) for row in op.matrix)
    return "\n".join(lines) + "\n"


def parse_operator(text: str) -> CompositeOperator:
    lines = _content_lines(text)
    head, n, d = _header(lines, "operator")
    size = d ** n
    rows = []
    last = head
    for lineno, fields in lines:
        if len(rows) == size:
            raise FormatError(f"more than the expected {size} matrix rows", lineno)
        rows.append(_complex_row(fields, size, lineno))
        last = lineno
    if len(rows) < size:
        raise FormatError(f"expected {size} matrix rows, found {len(rows)}", last)
    return CompositeOperator(n, d, np.array(rows))


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def read_ensemble(path) -> StateEnsemble:
    return parse_ensemble(read_text(path))


def read_operator(path) -> CompositeOperator:
    return parse_operator(read_text(path))


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def report_csv(artifact) -> str:
    """CSV text for a certificate, a decay curve or a POVM validation report."""
    if isinstance(artifact, SpanningCertificate):
        return csv_text(SpanningCertificate.CSV_HEADER, [artifact.csv_row()])
    if isinstance(artifact, DecayCurve):
        return csv_text(DecayCurve.CSV_HEADER, artifact.csv_rows())
    if isinstance(artifact, ValidationReport):
        return csv_text(CSV_VALIDATION_HEADER, artifact.csv_rows())
    raise TypeError(f"no CSV layout for {type(artifact).__name__}")


def emit_report(artifact, path) -> None:
    atomic_write(path, report_csv(artifact))
