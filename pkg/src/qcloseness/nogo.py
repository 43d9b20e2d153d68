"""Numerical witness that no unambiguous closeness test exists for ``c_min < A < 1``.

Take a base ensemble on one side of the threshold and tilt each member
``psi_i`` towards the ``d - 1`` directions orthogonal to it:

    psi_{i,j} = (psi_i + eps * phi_{i,j}) / sqrt(1 + eps^2),   j < d - 1
    psi_{i,d-1} = psi_i

For small ``eps`` every product ``psi_{1,j_1} (x) ... (x) psi_{n,j_n}`` stays on
the same side as the base, and since each factor family is a basis of the
one-particle space, the ``d**n`` products span the whole composite space. A
POVM element that must vanish in expectation on all of them is PSD with a
trivial support, i.e. it is the zero operator.

Indices are 0-based here; the unperturbed factor is ``j = d - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    EpsilonSearchError,
    FamilyVerificationError,
    PreconditionError,
    RegionSamplingError,
)
from .extremal import minimal_ensemble
from .povm import DEFAULT_CAP, CompositeOperator, ProductState, composite_dim, kron_state
from .states import (
    PureState,
    StateEnsemble,
    ThresholdSpec,
    batch_closeness,
    closeness,
    haar_state,
    haar_vectors,
    make_ensemble,
    make_state,
    meets_threshold,
)

S1, S2 = "S1", "S2"

EPSILON_START = 0.5
MAX_HALVINGS = 60
SPAN_RTOL = 1e-10
N_PROBES = 10
MAX_REJECTIONS = 10_000
_REJECTION_BATCH = 1_000


def _side(side) -> str:
    s = str(side).upper()
    if s not in (S1, S2):
        raise PreconditionError(f"side must be S1 or S2, got {side!r}")
    return s


def on_side(c: float, a: float, side: str) -> bool:
    """Does closeness ``c`` belong to region ``side`` for threshold ``a``?"""
    return meets_threshold(c, a) if side == S1 else not meets_threshold(c, a)


# -- perturbed family ------------------------------------------------------


def complement_basis(s: PureState) -> tuple:
    """Orthonormal basis of the orthogonal complement of ``s``.

    Uses the Householder reflection ``H = I - 2 w w^+ / |w|^2`` with
    ``w = s + exp(i arg s_0) e_0``; ``H`` is unitary with first column
    proportional to ``s``, and its remaining columns are returned.
    """
    v = s.amplitudes
    d = v.shape[0]
    phase = np.exp(1j * np.angle(v[0])) if v[0] != 0 else 1.0
    w = v.copy()
    w[0] += phase
    h = np.eye(d, dtype=complex) - 2.0 * np.outer(w, w.conj()) / np.vdot(w, w).real
    return tuple(make_state(h[:, j]) for j in range(1, d))


def _tilted(psi: PureState, phis: Sequence[PureState], eps: float) -> np.ndarray:
    """``d x d`` matrix whose columns are the tilted states of one factor."""
    cols = [(psi.amplitudes + eps * phi.amplitudes) / np.sqrt(1.0 + eps * eps) for phi in phis]
    cols.append(psi.amplitudes)
    return np.column_stack(cols)


def _member_closeness_table(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Closeness of every member, as an array indexed by ``(j_1, ..., j_n)``.

    Pairwise fidelities between the tilted states of factors ``k`` and ``l``
    are tabulated once and broadcast-summed over all index tuples.
    """
    n = len(factors)
    d = factors[0].shape[0]
    total = np.zeros((d,) * n)
    for k, l in itertools.combinations(range(n), 2):
        fid = np.abs(factors[k].conj().T @ factors[l]) ** 2
        shape = [1] * n
        shape[k] = shape[l] = d
        total = total + fid.reshape(shape)
    return 2.0 * total / (n * (n - 1))


@dataclass(frozen=True, eq=False)
class PerturbedFamily:
    base: StateEnsemble
    threshold: float
    epsilon: float
    side: str
    complements: tuple = field(repr=False)
    factor_matrices: tuple = field(repr=False)
    member_closeness: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def factor_ranks(self) -> tuple:
        return tuple(int(np.linalg.matrix_rank(f, rtol=SPAN_RTOL)) for f in self.factor_matrices)

    @property
    def independent(self) -> bool:
        """Whether each factor's tilted states are linearly independent."""
        return all(r == self.dim for r in self.factor_ranks)

    def indices(self):
        return itertools.product(range(self.dim), repeat=self.n)

    def member_states(self, idx: Sequence[int]) -> StateEnsemble:
        """Factor ensemble of the member with index tuple ``idx``."""
        return make_ensemble([f[:, j] for f, j in zip(self.factor_matrices, idx)])

    def member(self, idx: Sequence[int]) -> ProductState:
        return kron_state(self.member_states(idx).states, cap=self.dim ** self.n)

    @cached_property
    def members(self) -> dict:
        return {idx: self.member(idx) for idx in self.indices()}

    def member_matrix(self) -> np.ndarray:
        """``d**n x d**n`` matrix whose columns are the member product vectors.

        Column order is lexicographic in the index tuple, which makes it the
        Kronecker product of the per-factor matrices.
        """
        m = self.factor_matrices[0]
        for f in self.factor_matrices[1:]:
            m = np.kron(m, f)
        return m


def build_family(base: StateEnsemble, threshold: float, eps: float, side=S2, verify: bool = True) -> PerturbedFamily:
    """Tilt every base member by ``eps`` towards its orthogonal complement.

    With ``verify`` (the default) every one of the ``d**n`` members is
    checked, by direct fidelity evaluation, to lie on ``side``; a failure
    raises :class:`FamilyVerificationError`.
    """
    side = _side(side)
    ThresholdSpec.for_context(threshold, base.n, base.dim)
    if eps < 0 or not np.isfinite(eps):
        raise PreconditionError(f"epsilon must be finite and >= 0, got {eps!r}")
    complements = tuple(complement_basis(s) for s in base)
    factors = tuple(_tilted(s, phis, eps) for s, phis in zip(base, complements))
    table = _member_closeness_table(factors)
    table.flags.writeable = False
    fam = PerturbedFamily(base, float(threshold), float(eps), side, complements, factors, table)
    if verify:
        bad = [idx for idx in fam.indices() if not on_side(table[idx], threshold, side)]
        if bad:
            worst = bad[0]
            raise FamilyVerificationError(
                f"{len(bad)} of {table.size} members leave {side} at eps={eps!r}; "
                f"e.g. {worst} has closeness {table[worst]!r} vs threshold {threshold!r}"
            )
    return fam


def select_epsilon(base: StateEnsemble, threshold: float, side=S2) -> float:
    """Largest ``0.5 * 2**-k`` (``k <= 60``) keeping all members on ``side``."""
    side = _side(side)
    c = closeness(base)
    if not on_side(c, threshold, side):
        raise PreconditionError(f"base closeness {c!r} is not in {side} for threshold {threshold!r}")
    if side == S1 and meets_threshold(threshold, 1.0):
        raise PreconditionError("threshold 1 admits no perturbation on the S1 side (all members must be identical)")
    eps = EPSILON_START
    for _ in range(MAX_HALVINGS + 1):
        fam = build_family(base, threshold, eps, side, verify=False)
        if all(on_side(x, threshold, side) for x in fam.member_closeness.flat):
            return eps
        eps /= 2
    raise EpsilonSearchError(
        f"no admissible epsilon after {MAX_HALVINGS} halvings; "
        f"threshold gap {abs(threshold - c)!r} is below numerical resolution"
    )


def expanded_closeness(base: StateEnsemble, eps: float, idx: Sequence[int], complements=None) -> float:
    """Closeness of a family member computed from base overlaps alone.

    Expands ``|<psi_{k,j_k}|psi_{l,j_l}>|^2`` into overlaps between base
    states and complement vectors:

        N_k N_l |<psi_k|psi_l> + eps <psi_k|phi_l> + eps <phi_k|psi_l>
                 + eps^2 <phi_k|phi_l>|^2

    where ``N = 1 / (1 + eps^2)`` for a tilted factor and the ``phi`` term is
    absent (``N = 1``) for the unperturbed index ``d - 1``.
    """
    if complements is None:
        complements = tuple(complement_basis(s) for s in base)
    n, d = base.n, base.dim
    psis = [s.amplitudes for s in base]
    phis = []
    norms = []
    for j, comp in zip(idx, complements):
        if j == d - 1:
            phis.append(np.zeros(d, dtype=complex))
            norms.append(1.0)
        else:
            phis.append(comp[j].amplitudes)
            norms.append(1.0 / (1.0 + eps * eps))
    total = 0.0
    for k, l in itertools.combinations(range(n), 2):
        amp = (
            np.vdot(psis[k], psis[l])
            + eps * np.vdot(psis[k], phis[l])
            + eps * np.vdot(phis[k], psis[l])
            + eps * eps * np.vdot(phis[k], phis[l])
        )
        total += norms[k] * norms[l] * abs(amp) ** 2
    return 2.0 * total / (n * (n - 1))


# -- spanning certificate --------------------------------------------------


@dataclass(frozen=True)
class SpanningCertificate:
    n: int
    d: int
    threshold: float
    epsilon: float
    sigma_min: float
    sigma_max: float
    rank: int
    verdict: bool
    residual: float

    CSV_HEADER = ("n", "d", "A", "epsilon", "sigma_min", "rank", "verdict", "residual")

    def csv_row(self):
        return (self.n, self.d, self.threshold, self.epsilon, self.sigma_min, self.rank, self.verdict, self.residual)


def random_psd_probes(size: int, count: int = N_PROBES, seed=0) -> list:
    """``count`` PSD matrices ``B^+ B`` with complex Gaussian ``B``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        b = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        out.append(b.conj().T @ b)
    return out


def _complement_projector(vectors: np.ndarray, rtol: float = SPAN_RTOL):
    """Projector onto the orthogonal complement of the column span, and the rank."""
    u, s, _ = np.linalg.svd(vectors)
    rank = int(np.count_nonzero(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    null = u[:, rank:]
    return null @ null.conj().T, rank


def force_zero_operator(fam: PerturbedFamily, probe, require_spanning: bool = True, rtol: float = SPAN_RTOL) -> float:
    """Largest entry of the part of ``probe`` that survives the family's constraints.

    A PSD operator ``M`` with ``<v|M|v> = 0`` on every member ``v`` satisfies
    ``M v = 0``, so it lives on the orthogonal complement of their span:
    ``M = P M P`` with ``P`` the complement projector. This returns
    ``max |P M P|``, which is zero when the members span the space.

    Raises :class:`PreconditionError` if the family does not span and
    ``require_spanning`` is set.
    """
    m = probe.matrix if isinstance(probe, CompositeOperator) else np.asarray(probe)
    p, rank = _complement_projector(fam.member_matrix(), rtol)
    if require_spanning and rank < p.shape[0]:
        raise PreconditionError(f"family spans only {rank} of {p.shape[0]} dimensions")
    return float(np.max(np.abs(p @ m @ p)))


def spanning_certificate(
    fam: PerturbedFamily, probes: int = N_PROBES, seed=0, rtol: float = SPAN_RTOL, cap: int = DEFAULT_CAP
) -> SpanningCertificate:
    """Singular-value evidence that the family members span ``H^(x)n``.

    When they do, ``probes`` seeded random PSD operators are pushed through
    :func:`force_zero_operator` and the largest residual is recorded;
    otherwise the residual is NaN.
    """
    size = composite_dim(fam.n, fam.dim, cap)
    v = fam.member_matrix()
    s = np.linalg.svd(v, compute_uv=False)
    smax, smin = float(s[0]), float(s[-1])
    rank = int(np.count_nonzero(s > rtol * smax))
    verdict = rank == size and smin > rtol * smax
    residual = float("nan")
    if verdict:
        residual = max(force_zero_operator(fam, m, rtol=rtol) for m in random_psd_probes(size, probes, seed))
    return SpanningCertificate(fam.n, fam.dim, fam.threshold, fam.epsilon, smin, smax, rank, bool(verdict), residual)


def witness(n: int, d: int, threshold: float, side=S2, seed=1, epsilon=None, probes: int = N_PROBES,
            rtol: float = SPAN_RTOL):
    """Build a verified family on ``side`` and certify that it spans.

    The S2 base is drawn with :func:`sample_region`; the S1 base is ``n``
    copies of one random state. Returns ``(family, certificate)``.
    """
    side = _side(side)
    ThresholdSpec.for_context(threshold, n, d)
    rng = np.random.default_rng(seed)
    if side == S2:
        base = sample_region(n, d, threshold, S2, rng)
    else:
        psi = haar_state(d, rng)
        base = StateEnsemble((psi,) * n)
    eps = select_epsilon(base, threshold, side) if epsilon is None else epsilon
    fam = build_family(base, threshold, eps, side)
    return fam, spanning_certificate(fam, probes=probes, seed=rng, rtol=rtol)


# -- sampling and nullspace decay ------------------------------------------


def sample_region(n: int, d: int, threshold: float, side, seed=None, max_rejections: int = MAX_REJECTIONS) -> StateEnsemble:
    """Random ensemble with closeness ``>= A`` (S1) or ``< A`` (S2).

    Haar-random ensembles are drawn first and the first one on ``side`` is
    kept. After ``max_rejections`` misses a constructive sampler takes over:
    noisy copies of one state for S1, a noisy minimal ensemble for S2, with
    the noise halved until the ensemble lands on ``side``.
    """
    side = _side(side)
    spec = ThresholdSpec.for_context(threshold, n, d)
    rng = np.random.default_rng(seed)
    if side == S1 and spec.regime == "at_one":
        # Only exact copies reach C = 1; near-copies would pass the rounding slack.
        psi = make_state(haar_vectors(rng, (d,)))
        return StateEnsemble((psi,) * n)
    drawn = 0
    while drawn < max_rejections:
        size = min(_REJECTION_BATCH, max_rejections - drawn)
        batch = haar_vectors(rng, (size, n, d))
        cs = batch_closeness(batch)
        hits = np.flatnonzero(cs >= threshold - 1e-12) if side == S1 else np.flatnonzero(cs < threshold - 1e-12)
        for i in hits:
            e = make_ensemble(batch[i])
            if on_side(closeness(e), threshold, side):
                return e
        drawn += size

    if side == S1:
        centre = np.tile(haar_vectors(rng, (d,)), (n, 1))
    else:
        centre = minimal_ensemble(n, d).as_array()
    noise = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    for scale in [EPSILON_START * 2.0 ** -k for k in range(MAX_HALVINGS)] + [0.0]:
        e = make_ensemble(centre + scale * noise)
        if on_side(closeness(e), threshold, side):
            return e
    raise RegionSamplingError(f"could not sample side {side} for n={n}, d={d}, A={threshold!r}")


@dataclass(frozen=True)
class DecayCurve:
    side: str
    samples: tuple
    seed: int

    CSV_HEADER = ("sample_count", "nullspace_dim")

    @property
    def final_dimension(self) -> int:
        return self.samples[-1][1]

    def csv_rows(self):
        return list(self.samples)


def _trial_rng(seed, i):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(i)]))


def nullspace_decay(
    n: int, d: int, threshold: float, side, max_samples: int, seed: int = 1,
    tol: float = SPAN_RTOL, cap: int = DEFAULT_CAP,
) -> DecayCurve:
    """Track how much of ``H^(x)n`` stays unreached by sampled product states.

    Sample ``i`` draws its ensemble from a generator seeded by ``(seed, i)``.
    After each sample the dimension of the orthogonal complement of the span
    of all product vectors so far is recorded. For S2 with ``c_min < A < 1``
    it reaches zero; for S1 at ``A = 1`` it stops at the dimension of the
    non-symmetric subspace.
    """
    side = _side(side)
    size = composite_dim(n, d, cap)
    basis = np.zeros((size, 0), dtype=complex)
    out = []
    for i in range(1, max_samples + 1):
        e = sample_region(n, d, threshold, side, _trial_rng(seed, i))
        v = kron_state(e.states, cap=cap).composite.copy()
        for _ in range(2):
            v = v - basis @ (basis.conj().T @ v)
        r = np.linalg.norm(v)
        if r > tol and basis.shape[1] < size:
            basis = np.column_stack([basis, v / r])
        out.append((i, size - basis.shape[1]))
    return DecayCurve(side, tuple(out), int(seed))
