"""Measurements on the composite space of ``n`` copies of a ``d``-level system.

Tensor index convention everywhere: the first factor is the most significant
digit, i.e. ``np.kron(f_1, np.kron(f_2, ...))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionError, EmptyInputError, NonHermitianError, SizeCapError
from .states import PureState

DEFAULT_CAP = 4096
MAX_PERMUTATION_FACTORS = 6

HERMITIAN_ATOL = 1e-12
POSITIVITY_RTOL = 1e-10
COMPLETENESS_ATOL = 1e-10
PROBABILITY_IMAG_ATOL = 1e-12

R1, R2, R_INCONCLUSIVE = "R1", "R2", "R?"


def composite_dim(n: int, d: int, cap: int = DEFAULT_CAP) -> int:
    """``d**n``, refusing sizes above ``cap``."""
    size = d ** n
    if size > cap:
        raise SizeCapError(f"composite dimension {d}^{n} = {size} exceeds cap {cap}")
    return size


@dataclass(frozen=True, eq=False)
class CompositeOperator:
    n: int
    dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        size = self.dim ** self.n
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (size, size):
            raise DimensionError(f"expected a {size}x{size} matrix for n={self.n}, d={self.dim}, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, n, d):
        return cls(n, d, np.eye(d ** n))

    @classmethod
    def zero(cls, n, d):
        size = d ** n
        return cls(n, d, np.zeros((size, size)))

    def __add__(self, other):
        _check_same_space(self, other)
        return CompositeOperator(self.n, self.dim, self.matrix + other.matrix)

    def __sub__(self, other):
        _check_same_space(self, other)
        return CompositeOperator(self.n, self.dim, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return CompositeOperator(self.n, self.dim, scalar * self.matrix)

    __rmul__ = __mul__


def _check_same_space(a, b):
    if (a.n, a.dim) != (b.n, b.dim):
        raise DimensionError(f"operators act on different spaces: ({a.n},{a.dim}) vs ({b.n},{b.dim})")


@dataclass(frozen=True, eq=False)
class ProductState:
    factors: tuple
    composite: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return self.factors[0].dim


def kron_state(factors: Sequence[PureState], cap: int = DEFAULT_CAP) -> ProductState:
    """Tensor product of ``factors`` (first factor most significant)."""
    factors = tuple(factors)
    if len(factors) < 2:
        raise DimensionError(f"a product state needs at least 2 factors, got {len(factors)}")
    d = factors[0].dim
    if any(f.dim != d for f in factors):
        raise DimensionError("product factors have mixed dimensions")
    composite_dim(len(factors), d, cap)
    v = factors[0].amplitudes
    for f in factors[1:]:
        v = np.kron(v, f.amplitudes)
    v = np.array(v)
    v.flags.writeable = False
    return ProductState(factors, v)


def outcome_probability(m: CompositeOperator, s: ProductState) -> float:
    """Born-rule probability ``<s|M|s>`` of the outcome with element ``M``."""
    if m.size != s.composite.shape[0]:
        raise DimensionError(f"operator size {m.size} does not match state size {s.composite.shape[0]}")
    v = s.composite
    value = np.vdot(v, m.matrix @ v)
    if abs(value.imag) >= PROBABILITY_IMAG_ATOL:
        raise NonHermitianError(f"expectation has imaginary part {value.imag!r}")
    p = float(value.real)
    if -1e-12 <= p < 0.0:
        p = 0.0
    return p


class Povm:
    """Labeled positive operators on one composite space.

    Construction does not enforce positivity or completeness; use
    :func:`validate_povm` (or :meth:`is_valid`) to check them.
    """

    def __init__(self, elements: Mapping[str, CompositeOperator]):
        elements = dict(elements)
        if not elements:
            raise EmptyInputError("a POVM needs at least one element")
        first = next(iter(elements.values()))
        for op in elements.values():
            _check_same_space(first, op)
        self._elements = elements
        self.n = first.n
        self.dim = first.dim

    @property
    def labels(self):
        return list(self._elements)

    def __getitem__(self, label) -> CompositeOperator:
        return self._elements[label]

    def __iter__(self):
        return iter(self._elements.items())

    def __len__(self):
        return len(self._elements)

    def probabilities(self, s: ProductState) -> dict:
        return {label: outcome_probability(op, s) for label, op in self}

    def is_valid(self) -> bool:
        return validate_povm(self).passed

    def __repr__(self):
        return f"Povm(n={self.n}, dim={self.dim}, labels={self.labels})"


@dataclass(frozen=True)
class ElementCheck:
    label: str
    min_eigenvalue: float
    hermiticity_residue: float
    completeness_residue: float
    positive: bool
    hermitian: bool


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple
    completeness_residue: float
    passed: bool

    def csv_rows(self):
        return [
            (r.label, r.min_eigenvalue, r.hermiticity_residue, r.completeness_residue)
            for r in self.rows
        ]


def validate_povm(p: Povm, completeness_atol: float = COMPLETENESS_ATOL) -> ValidationReport:
    """Check Hermiticity, positivity and completeness of every element.

    The completeness residue is the largest entry of ``|sum_i M_i - I|``; it
    is shared by all rows of the report.
    """
    total = np.zeros((p[p.labels[0]].size,) * 2, dtype=complex)
    checks = []
    for label, op in p:
        m = op.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        sym = (m + m.conj().T) / 2
        eigs = np.linalg.eigvalsh(sym)
        scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
        checks.append((label, float(eigs[0]), herm, eigs[0] >= -POSITIVITY_RTOL * scale, herm <= HERMITIAN_ATOL))
        total += m
    complete = float(np.max(np.abs(total - np.eye(total.shape[0]))))
    rows = tuple(ElementCheck(lab, lo, h, complete, pos, isherm) for lab, lo, h, pos, isherm in checks)
    passed = complete <= completeness_atol and all(r.positive and r.hermitian for r in rows)
    return ValidationReport(rows, complete, bool(passed))


def permutation_indices(perm: Sequence[int], n: int, d: int) -> np.ndarray:
    """Index map of the factor permutation ``perm``.

    The operator ``U`` sends the product ``f_0 (x) ... (x) f_{n-1}`` to the
    product whose slot ``perm[k]`` holds ``f_k``; ``U e_i = e_{idx[i]}``.
    """
    digits = np.indices((d,) * n).reshape(n, -1)
    out = np.empty_like(digits)
    for k, target in enumerate(perm):
        out[target] = digits[k]
    weights = d ** np.arange(n - 1, -1, -1)
    return weights @ out


def permutation_operator(perm: Sequence[int], n: int, d: int, cap: int = DEFAULT_CAP) -> CompositeOperator:
    size = composite_dim(n, d, cap)
    u = np.zeros((size, size))
    u[permutation_indices(perm, n, d), np.arange(size)] = 1.0
    return CompositeOperator(n, d, u)


def symmetric_projector(n: int, d: int, cap: int = DEFAULT_CAP) -> CompositeOperator:
    """Projector onto the totally symmetric subspace of ``n`` ``d``-level factors.

    Averages all ``n!`` factor permutations. The permutation matrices are
    accumulated as integer counts, so the result does not depend on summation
    order.
    """
    if n > MAX_PERMUTATION_FACTORS:
        raise SizeCapError(f"permutation sum limited to n <= {MAX_PERMUTATION_FACTORS}, got n={n}")
    if n < 1 or d < 1:
        raise DimensionError(f"invalid n={n}, d={d}")
    size = composite_dim(n, d, cap)
    counts = np.zeros((size, size), dtype=np.int64)
    cols = np.arange(size)
    for perm in permutations(range(n)):
        counts[permutation_indices(perm, n, d), cols] += 1
    return CompositeOperator(n, d, counts / math.factorial(n))


def symmetric_dimension(n: int, d: int) -> int:
    return math.comb(n + d - 1, d - 1)


def comparison_povm(n: int, d: int, cap: int = DEFAULT_CAP) -> Povm:
    """Unambiguous test for "all ``n`` states identical" (threshold 1).

    ``R2`` (the states differ) is the projector onto the complement of the
    symmetric subspace and never fires on ``|psi>^(x)n``; the rest goes to
    the inconclusive outcome.
    """
    sym = symmetric_projector(n, d, cap)
    return Povm({R2: CompositeOperator.identity(n, d) - sym, R_INCONCLUSIVE: sym})


def unambiguity_violation(m: CompositeOperator, forbidden: Sequence[ProductState]) -> float:
    """Largest probability that ``m`` fires on a state where it must not."""
    forbidden = list(forbidden)
    if not forbidden:
        raise EmptyInputError("no forbidden states supplied")
    return max(outcome_probability(m, s) for s in forbidden)
