"""Communication matrices and their support graphs.

A communication matrix ``A`` is an ``N x N`` row-stochastic matrix. Entry
``a[i, j] > 0`` means agent ``i`` takes the value of agent ``j`` into
account, i.e. the support graph carries a directed edge ``j -> i``.

Irreducibility, period, bistochasticity and the communication-complexity
index only depend on the support pattern (except bistochasticity), and
are reported together by :func:`diagnostics`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DimensionError, DomainError, IsolatedNodeError, NotStochasticError

ROW_SUM_TOL = 1e-12
BISTOCHASTIC_TOL = 1e-12
SYMMETRY_TOL = 1e-12

NAMED_KINDS = ("identity", "full", "tridiag_a1", "tridiag_a2", "star_a3")


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Immutable row-stochastic matrix.

    Parameters
    ----------
    entries : array_like, shape (N, N)
        Nonnegative entries whose rows sum to one within ``1e-12``.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotStochasticError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 2:
            raise DimensionError("a communication matrix needs at least 2 agents")
        if not np.all(np.isfinite(a)):
            raise NotStochasticError("entries must be finite")
        if np.any(a < 0):
            raise NotStochasticError("entries must be nonnegative")
        dev = np.max(np.abs(a.sum(axis=1) - 1.0))
        if dev > ROW_SUM_TOL:
            raise NotStochasticError(f"row sums deviate from 1 by {dev:.3e}")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def support(self) -> np.ndarray:
        """Boolean mask of strictly positive entries."""
        return self.entries > 0

    def graph(self) -> "CommGraph":
        i, j = np.nonzero(self.support)
        return CommGraph(self.n, frozenset(zip(j.tolist(), i.tolist())))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, StochasticMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True)
class CommGraph:
    """Directed communication graph on nodes ``0..n-1``.

    ``(j, i)`` in ``edges`` means ``j`` sends information to ``i``. Self
    loops ``(i, i)`` are allowed. ``directed`` is ``False`` when every edge
    is present in both directions.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset((int(j), int(i)) for j, i in self.edges)
        for j, i in edges:
            if not (0 <= j < self.n and 0 <= i < self.n):
                raise DomainError(f"edge ({j}, {i}) outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def undirected(cls, n: int, pairs: Iterable[tuple[int, int]], self_loops: bool = False):
        """Build a symmetric graph from unordered pairs, optionally adding all self-loops."""
        edges = set()
        for u, v in pairs:
            edges.add((u, v))
            edges.add((v, u))
        if self_loops:
            edges.update((i, i) for i in range(n))
        return cls(n, frozenset(edges))

    @classmethod
    def from_adjacency(cls, adj) -> "CommGraph":
        """Graph whose edge ``j -> i`` exists iff ``adj[i, j] > 0`` (transpose of the adjacency)."""
        adj = np.asarray(adj)
        i, j = np.nonzero(adj > 0)
        return cls(adj.shape[0], frozenset(zip(j.tolist(), i.tolist())))

    @property
    def directed(self) -> bool:
        return any((i, j) not in self.edges for j, i in self.edges)

    def in_neighbors(self, i: int) -> list[int]:
        return sorted(j for j, k in self.edges if k == i)

    def to_support(self) -> np.ndarray:
        """0/1 matrix ``g`` with ``g[i, j] = 1`` iff ``(j, i)`` is an edge."""
        g = np.zeros((self.n, self.n))
        for j, i in self.edges:
            g[i, j] = 1.0
        return g


@dataclass(frozen=True)
class GraphDiagnostics:
    irreducible: bool
    period: int | None  # None when reducible
    bistochastic: bool
    symmetric: bool
    complexity_index: int

    @property
    def aperiodic(self) -> bool:
        return self.period == 1


def build_named(kind: str, n: int) -> StochasticMatrix:
    """Return one of the reference communication matrices.

    ``identity`` is no communication, ``full`` is ``11^T / n``, ``tridiag_a1``
    and ``tridiag_a2`` are the nearest-neighbour chains with weights 1/2 and
    1/3, and ``star_a3`` has node 0 listening to everyone while every other
    node mixes its own value with node 0's.
    """
    if kind not in NAMED_KINDS:
        raise DomainError(f"unknown matrix kind {kind!r}; expected one of {NAMED_KINDS}")
    min_n = 3 if kind.startswith("tridiag") else 2
    if n < min_n:
        raise DimensionError(f"{kind} needs n >= {min_n}, got {n}")

    if kind == "identity":
        a = np.eye(n)
    elif kind == "full":
        a = np.full((n, n), 1.0 / n)
    elif kind == "tridiag_a1":
        a = np.zeros((n, n))
        idx = np.arange(n - 1)
        a[idx, idx + 1] = 0.5
        a[idx + 1, idx] = 0.5
        a[0, 0] = a[-1, -1] = 0.5
    elif kind == "tridiag_a2":
        third = 1.0 / 3.0
        a = np.zeros((n, n))
        idx = np.arange(n - 1)
        a[idx, idx + 1] = third
        a[idx + 1, idx] = third
        a[np.arange(n), np.arange(n)] = third
        a[0, 0] = a[-1, -1] = 1.0 - third
    else:
        a = np.zeros((n, n))
        a[0, :] = 1.0 / n
        a[1:, 0] = 1.0 / n
        a[np.arange(1, n), np.arange(1, n)] = (n - 1.0) / n
    return StochasticMatrix(a)


def build_h_alpha(alpha: float) -> StochasticMatrix:
    """Two-agent matrix whose rows both equal ``(1/alpha, (alpha-1)/alpha)``."""
    if not alpha > 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    row = [1.0 / alpha, (alpha - 1.0) / alpha]
    return StochasticMatrix(np.array([row, row]))


def build_equal_neighbor(graph: CommGraph) -> StochasticMatrix:
    """Equal-neighbour weights ``a[i, j] = 1/|N(i)|`` over the in-neighbours of ``i``."""
    g = graph.to_support()
    deg = g.sum(axis=1)
    if np.any(deg == 0):
        lonely = np.flatnonzero(deg == 0).tolist()
        raise IsolatedNodeError(f"nodes without in-neighbours: {lonely}")
    return StochasticMatrix(g / deg[:, None])


def is_irreducible(support: np.ndarray) -> bool:
    n_comp, _ = connected_components(csr_matrix(support), directed=True, connection="strong")
    return n_comp == 1


def period(support: np.ndarray) -> int:
    """Period of an irreducible support digraph (``support[u, v]`` = edge ``u -> v``).

    BFS levels from node 0; the period is the gcd of ``level[u] + 1 - level[v]``
    over all edges.
    """
    n = support.shape[0]
    succ = [np.flatnonzero(support[u]) for u in range(n)]
    level = np.full(n, -1, dtype=np.int64)
    level[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    if np.any(level < 0):
        raise DomainError("period is only defined for irreducible supports")
    g = 0
    for u in range(n):
        for v in succ[u]:
            g = gcd(g, int(abs(level[u] + 1 - level[v])))
    return g


def complexity_index(a: StochasticMatrix) -> int:
    """Maximal in-degree of the support graph.

    Self-loops count twice when the support is symmetric (undirected graph)
    and once otherwise.
    """
    s = a.support
    indeg = s.sum(axis=1).astype(int)
    if np.array_equal(s, s.T):
        indeg = indeg + np.diag(s).astype(int)
    return int(indeg.max())


def diagnostics(a: StochasticMatrix) -> GraphDiagnostics:
    s = a.support
    irreducible = is_irreducible(s)
    return GraphDiagnostics(
        irreducible=irreducible,
        period=period(s) if irreducible else None,
        bistochastic=bool(np.max(np.abs(a.entries.sum(axis=0) - 1.0)) <= BISTOCHASTIC_TOL),
        symmetric=bool(np.max(np.abs(a.entries - a.entries.T)) <= SYMMETRY_TOL),
        complexity_index=complexity_index(a),
    )


def matrix_power_frobenius_sq(a: StochasticMatrix, k: int) -> float:
    """Squared Frobenius norm of ``A**k`` (``A**0`` is the identity)."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    p = np.linalg.matrix_power(a.entries, k)
    return float(np.sum(p * p))
