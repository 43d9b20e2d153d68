"""Pure states, ensembles of them, and the closeness functional.

The closeness of ``n`` pure states is their average pairwise fidelity

    C = 2 / (n (n - 1)) * sum_{i<j} |<psi_i|psi_j>|^2

and the threshold question asks whether ``C >= A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError, InputError, ThresholdRangeError, ZeroVectorError

NORM_ATOL = 1e-10
# C >= A is decided with this slack so exact boundary cases (C == A in exact
# arithmetic) land on the C >= A side despite rounding.
THRESHOLD_ATOL = 1e-12

REGIMES = ("below_cmin_invalid", "at_cmin", "interior", "at_one", "above_one_invalid")


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm amplitude vector. Build with :func:`make_state`."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2:
            raise DimensionError(f"a state needs at least 2 amplitudes, got shape {amps.shape}")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_ATOL:
            raise InputError("amplitudes are not normalized; use make_state()")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"PureState(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


def make_state(amplitudes) -> PureState:
    """Return the normalized state with the given (unnormalized) amplitudes.

    The global phase is kept as given.

    Raises
    ------
    DimensionError
        If fewer than two amplitudes are given.
    ZeroVectorError
        If the vector is zero.
    """
    v = np.array(amplitudes, dtype=complex).reshape(-1)
    if v.size < 2:
        raise DimensionError(f"state dimension must be >= 2, got {v.size}")
    norm = np.linalg.norm(v)
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroVectorError("cannot normalize a zero (or non-finite) vector")
    # Leave already-normalized input bit-for-bit untouched so text round trips are exact.
    if abs(norm - 1.0) > 4 * np.finfo(float).eps:
        v = v / norm
    return PureState(v)


def basis_state(k: int, d: int) -> PureState:
    """Computational basis state ``|k>`` in dimension ``d``."""
    if not 0 <= k < d:
        raise DimensionError(f"basis index {k} out of range for dimension {d}")
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return PureState(v)


@dataclass(frozen=True, eq=False)
class StateEnsemble:
    """Ordered list of ``n >= 2`` pure states of a common dimension."""

    states: tuple

    def __post_init__(self):
        states = tuple(s if isinstance(s, PureState) else make_state(s) for s in self.states)
        if len(states) < 2:
            raise DomainError(f"an ensemble needs at least 2 states, got {len(states)}")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionError(f"ensemble members have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "states", states)

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i):
        return self.states[i]

    def as_array(self) -> np.ndarray:
        """``(n, d)`` array whose rows are the member amplitudes."""
        return np.array([s.amplitudes for s in self.states])

    @property
    def closeness(self) -> float:
        return closeness(self)

    def __repr__(self):
        return f"StateEnsemble(n={self.n}, dim={self.dim})"


def make_ensemble(vectors: Sequence) -> StateEnsemble:
    """Normalize each row of ``vectors`` and bundle them into an ensemble."""
    return StateEnsemble(tuple(make_state(v) for v in vectors))


def fidelity(a: PureState, b: PureState) -> float:
    """Squared overlap ``|<a|b>|^2`` of two pure states."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    f = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(f, 1.0))


def closeness(e: StateEnsemble) -> float:
    """Average pairwise fidelity of the ensemble members."""
    n = e.n
    total = sum(fidelity(e[i], e[j]) for i, j in combinations(range(n), 2))
    return 2.0 * total / (n * (n - 1))


def batch_closeness(amplitudes: np.ndarray) -> np.ndarray:
    """Closeness of many ensembles at once.

    ``amplitudes`` has shape ``(batch, n, d)`` with unit-norm rows. Used by the
    rejection samplers; :func:`closeness` stays the reference definition.
    """
    a = np.asarray(amplitudes)
    n = a.shape[-2]
    g = np.einsum("bik,bjk->bij", a.conj(), a)
    sq = np.abs(g) ** 2
    off = sq.sum(axis=(-2, -1)) - np.trace(sq, axis1=-2, axis2=-1)
    return off / (n * (n - 1))


@dataclass(frozen=True)
class ThresholdSpec:
    """Threshold ``A`` tied to the ``(n, d)`` context that makes it admissible."""

    value: float
    n: int
    d: int
    regime: str

    @classmethod
    def for_context(cls, value: float, n: int, d: int) -> "ThresholdSpec":
        regime = classify_threshold(value, n, d)
        if regime.endswith("_invalid"):
            from .extremal import c_min

            raise ThresholdRangeError(
                f"threshold {value!r} outside [c_min, 1] = [{c_min(n, d)!r}, 1] for n={n}, d={d}"
            )
        return cls(float(value), n, d, regime)


def classify_threshold(value: float, n: int, d: int) -> str:
    """Label where ``value`` sits relative to ``[c_min(n, d), 1]``."""
    from .extremal import c_min

    lo = c_min(n, d)
    if not np.isfinite(value) or value < lo - THRESHOLD_ATOL:
        return "below_cmin_invalid"
    if value > 1.0 + THRESHOLD_ATOL:
        return "above_one_invalid"
    if abs(value - lo) <= THRESHOLD_ATOL:
        return "at_cmin"
    if abs(value - 1.0) <= THRESHOLD_ATOL:
        return "at_one"
    return "interior"


def threshold_predicate(e: StateEnsemble, t) -> bool:
    """Ground-truth label: True iff ``closeness(e) >= A`` (the S1 side).

    ``t`` may be a :class:`ThresholdSpec` or a plain number. Either way it is
    checked against the ensemble's own ``(n, d)``.
    """
    value = t.value if isinstance(t, ThresholdSpec) else float(t)
    ThresholdSpec.for_context(value, e.n, e.dim)
    return meets_threshold(closeness(e), value)


def meets_threshold(c: float, a: float) -> bool:
    return c >= a - THRESHOLD_ATOL


# -- random sampling -------------------------------------------------------


def haar_vectors(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit vectors along the last axis, Haar distributed (normalized complex Gaussians)."""
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def haar_state(d: int, rng=None) -> PureState:
    rng = np.random.default_rng(rng)
    return make_state(haar_vectors(rng, (d,)))


def haar_ensemble(n: int, d: int, rng=None) -> StateEnsemble:
    rng = np.random.default_rng(rng)
    return make_ensemble(haar_vectors(rng, (n, d)))


def haar_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-random ``d x d`` unitary (QR of a complex Ginibre matrix, phases fixed)."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def transform(e: StateEnsemble, u: np.ndarray) -> StateEnsemble:
    """Apply the same ``d x d`` matrix to every member."""
    return make_ensemble(e.as_array() @ np.asarray(u).T)
