"""Gram-matrix view of closeness, its lower bound, and ensembles that attain it.

With ``G_ij = <psi_i|psi_j>`` the closeness is ``(Tr G^2 - n) / (n (n - 1))``.
Because ``G`` is PSD with trace ``n`` and rank at most ``d``, the power-mean
inequality gives ``Tr G^2 >= n^2 / d``, hence

    C >= c_min(n, d) = (n - d) / (d (n - 1))      for n > d,

and ``c_min = 0`` otherwise. Equality needs the top ``d`` Gram eigenvalues all
equal to ``n / d``, which the Fourier ensemble of :func:`minimal_ensemble`
achieves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .states import StateEnsemble, basis_state, make_state

RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class GramMatrix:
    entries: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    @property
    def trace_of_square(self) -> float:
        """``Tr G^2`` from the spectrum."""
        return float(np.sum(self.eigenvalues ** 2))

    def numerical_rank(self, rtol: float = RANK_RTOL) -> int:
        top = self.eigenvalues[0]
        return int(np.count_nonzero(self.eigenvalues > rtol * top))

    def check(self, d: int) -> list[str]:
        """Return the invariants this matrix violates for states in dimension ``d``."""
        g = self.entries
        lam = self.eigenvalues
        problems = []
        if np.max(np.abs(g - g.conj().T)) > 1e-12:
            problems.append("not Hermitian")
        if np.max(np.abs(np.diagonal(g) - 1.0)) > 1e-12:
            problems.append("diagonal not unit")
        if lam[-1] < -1e-10:
            problems.append(f"negative eigenvalue {lam[-1]!r}")
        if abs(self.trace - self.n) > 1e-10:
            problems.append(f"trace {self.trace!r} != n")
        if np.any(lam[d:] > RANK_RTOL * lam[0]):
            problems.append(f"numerical rank exceeds d={d}")
        return problems


def gram_matrix(e: StateEnsemble) -> GramMatrix:
    """Pairwise inner products in ensemble order, spectrum sorted descending."""
    a = e.as_array()
    g = a.conj() @ a.T
    g.flags.writeable = False
    lam = np.linalg.eigvalsh(g)[::-1].copy()
    lam.flags.writeable = False
    return GramMatrix(g, lam)


def closeness_via_gram(e: StateEnsemble) -> float:
    """``(sum(lambda_i^2) - n) / (n (n - 1))`` from the Gram spectrum."""
    g = gram_matrix(e)
    n = g.n
    return (g.trace_of_square - n) / (n * (n - 1))


def c_min(n: int, d: int) -> float:
    """Smallest closeness attainable by ``n`` pure states in dimension ``d``.

    >>> c_min(3, 2)
    0.25
    >>> c_min(2, 5)
    0.0
    """
    if n < 2 or d < 2:
        raise DomainError(f"c_min needs n >= 2 and d >= 2, got n={n}, d={d}")
    if n <= d:
        return 0.0
    return (n - d) / (d * (n - 1))


def minimal_ensemble(n: int, d: int) -> StateEnsemble:
    """An ensemble whose closeness equals :func:`c_min`.

    For ``n > d`` the states are ``|psi_j> = d**-0.5 * sum_k w**(j k) |k>``,
    ``k < d``, with ``w = exp(2 pi i / n)``. Note the root of unity is of order
    ``n``, not ``d``. For ``n <= d`` the first ``n`` basis states are returned.
    """
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    if n < 2:
        raise DomainError(f"need at least 2 states, got {n}")
    if n <= d:
        return StateEnsemble(tuple(basis_state(k, d) for k in range(n)))
    j = np.arange(n)[:, None]
    k = np.arange(d)[None, :]
    amps = np.exp(2j * np.pi * ((j * k) % n) / n) / np.sqrt(d)
    return StateEnsemble(tuple(make_state(row) for row in amps))


def power_mean_gap(g: GramMatrix, d: int) -> float:
    """``Tr G^2 - n^2 / d``; non-negative for states in dimension ``d``."""
    return g.trace_of_square - g.n ** 2 / d
