"""Total-support test and Sinkhorn-Knopp balancing.

A nonnegative square ``G`` can be scaled to a bistochastic ``D1 G D2`` with
positive diagonals ``D1, D2`` exactly when it has total support: every
positive entry lies on a positive permutation diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import ConvergenceError, DomainError, NoTotalSupportError
from .matrices import BISTOCHASTIC_TOL, CommGraph, StochasticMatrix


@dataclass(frozen=True, eq=False)
class SupportMatrix:
    """Nonnegative square matrix ``g`` with ``g[i, j] > 0`` iff ``j`` sends to ``i``."""

    entries: np.ndarray

    def __post_init__(self):
        g = np.array(self.entries, dtype=float, copy=True)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {g.shape}")
        if np.any(g < 0) or not np.all(np.isfinite(g)):
            raise DomainError("support entries must be finite and nonnegative")
        g.flags.writeable = False
        object.__setattr__(self, "entries", g)

    @classmethod
    def from_graph(cls, graph: CommGraph) -> "SupportMatrix":
        return cls(graph.to_support())

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class BalancingResult:
    balanced: StochasticMatrix
    d1: np.ndarray
    d2: np.ndarray
    iterations: int
    residual: float


def _as_support(g) -> SupportMatrix:
    return g if isinstance(g, SupportMatrix) else SupportMatrix(g)


def _has_perfect_matching(mask: np.ndarray) -> bool:
    n = mask.shape[0]
    if n == 0:
        return True
    match = maximum_bipartite_matching(csr_matrix(mask.astype(np.int8)), perm_type="column")
    return bool(np.all(match >= 0))


def has_total_support(g) -> bool:
    """True iff every positive entry belongs to some perfect matching of the positive pattern.

    Each positive entry ``(i, j)`` not already covered by a known matching is
    forced by deleting row ``i`` and column ``j`` and testing the remainder.
    """
    mask = _as_support(g).entries > 0
    n = mask.shape[0]
    if not mask.any():
        return True  # vacuous: no positive entry to cover
    base = maximum_bipartite_matching(csr_matrix(mask.astype(np.int8)), perm_type="column")
    if np.any(base < 0):
        return False
    covered = np.zeros_like(mask)
    covered[np.arange(n), base] = True
    rows = np.arange(n)
    for i, j in zip(*np.nonzero(mask & ~covered)):
        sub = mask[np.delete(rows, i)][:, np.delete(rows, j)]
        if not _has_perfect_matching(sub):
            return False
    return True


def sinkhorn_knopp(g, tol: float = 1e-10, max_iter: int = 100_000) -> BalancingResult:
    """Scale ``g`` to a bistochastic matrix by alternating row and column normalisation.

    Each iteration normalises rows, measures the column-sum deviation (the
    residual), and normalises columns only if the residual still exceeds
    ``tol``.  Once ``tol`` is met, iterations continue (within ``max_iter``)
    while the residual keeps shrinking, down to the ``1e-12`` bistochastic
    tolerance of :func:`~collabest.matrices.diagnostics`.  The returned
    matrix therefore has exact row sums and column sums within ``tol``.  The scaling vectors are rescaled to equal geometric means,
    so a symmetric input yields ``d1 == d2``.

    Raises
    ------
    NoTotalSupportError
        If ``g`` has a zero row/column or lacks total support.
    ConvergenceError
        If the residual is still above ``tol`` after ``max_iter`` iterations.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    gm = _as_support(g).entries
    if np.any(gm.sum(axis=0) == 0) or np.any(gm.sum(axis=1) == 0):
        raise NoTotalSupportError("support has an empty row or column")
    if not has_total_support(gm):
        raise NoTotalSupportError("support lacks total support; no bistochastic scaling exists")

    n = gm.shape[0]
    d1 = np.ones(n)
    d2 = np.ones(n)
    target = min(tol, BISTOCHASTIC_TOL)
    residual = previous = np.inf
    it = 0
    while it < max_iter:
        it += 1
        d1 = 1.0 / (gm @ d2)
        col = d2 * (gm.T @ d1)
        residual = float(np.max(np.abs(col - 1.0)))
        # past tol, keep polishing towards the diagnostics tolerance while it still helps
        if residual <= target or (residual <= tol and residual >= previous):
            break
        previous = residual
        d2 = d2 / col
    if residual > tol:
        raise ConvergenceError(f"no convergence after {max_iter} iterations (residual {residual:.3e})")

    shift = np.exp(0.5 * (np.mean(np.log(d2)) - np.mean(np.log(d1))))
    d1 = d1 * shift
    d2 = d2 / shift
    balanced = d1[:, None] * gm * d2[None, :]
    balanced /= balanced.sum(axis=1, keepdims=True)
    residual = float(
        max(np.max(np.abs(balanced.sum(axis=1) - 1.0)), np.max(np.abs(balanced.sum(axis=0) - 1.0)))
    )
    return BalancingResult(StochasticMatrix(balanced), d1, d2, it, residual)
