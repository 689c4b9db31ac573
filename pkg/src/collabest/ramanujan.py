"""Random regular graphs and Ramanujan communication matrices.

Graphs are drawn with the Steger-Wormald variant of the pairing model:
``n*d`` points sit in ``n`` buckets and random pairs of points are joined
one at a time, rejecting any pair that would create a self-loop or a
repeated edge.  Only when no admissible pair is left does the construction
restart.  Dense graphs (``d > (n-1)/2``) are drawn as the complement of a
sparse ``(n-1-d)``-regular graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import DomainError, GenerationTimeoutError, InfeasibleParametersError
from .matrices import StochasticMatrix, diagnostics
from .spectral import SpectrumReport

RAMANUJAN_TOL = 1e-9
_STALL_LIMIT = 64


@dataclass(frozen=True, eq=False)
class RegularGraph:
    """Simple undirected ``d``-regular graph stored as a 0/1 adjacency matrix."""

    n: int
    d: int
    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=float, copy=True)
        if adj.shape != (self.n, self.n):
            raise DomainError(f"adjacency must be {self.n}x{self.n}")
        if not np.isin(adj, (0.0, 1.0)).all():
            raise DomainError("adjacency must be 0/1 (no multiple edges)")
        if np.any(np.diag(adj) != 0):
            raise DomainError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise DomainError("adjacency must be symmetric")
        if np.any(adj.sum(axis=1) != self.d):
            raise DomainError(f"every vertex must have degree {self.d}")
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    def edge_list(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency))
        return list(zip(i.tolist(), j.tolist()))

    def comm_matrix(self) -> StochasticMatrix:
        return StochasticMatrix(self.adjacency / self.d)


@dataclass(frozen=True, eq=False)
class RamanujanVerdict:
    is_ramanujan: bool
    mu2: float
    muN: float
    threshold: float
    eigenvalues: np.ndarray  # adjacency spectrum, descending


@dataclass(frozen=True, eq=False)
class RamanujanSample:
    """An accepted draw together with everything computed while accepting it."""

    graph: RegularGraph
    matrix: StochasticMatrix
    verdict: RamanujanVerdict
    spectrum: SpectrumReport
    attempts: int
    ramanujan_rejections: int


def _check_params(n: int, d: int, min_d: int = 3) -> None:
    if d < min_d:
        raise InfeasibleParametersError(f"degree must be at least {min_d}, got {d}")
    if d >= n:
        raise InfeasibleParametersError(f"degree {d} must be smaller than n={n}")
    if (n * d) % 2:
        raise InfeasibleParametersError(f"n*d = {n * d} is odd")


def _pairing(n: int, d: int, rng: np.random.Generator, max_restarts: int) -> np.ndarray:
    if d == 0:
        return np.zeros((n, n))
    for _ in range(max_restarts):
        points = list(np.repeat(np.arange(n), d))
        nbrs = [set() for _ in range(n)]
        m = len(points)
        stuck = False
        while m:
            stalls = 0
            while True:
                a, b = (rng.random(2) * m).astype(int)
                u, v = points[a], points[b]
                if a != b and u != v and v not in nbrs[u]:
                    break
                stalls += 1
                if stalls >= _STALL_LIMIT:
                    ok = [
                        (x, y)
                        for x in range(m)
                        for y in range(x + 1, m)
                        if points[x] != points[y] and points[y] not in nbrs[points[x]]
                    ]
                    if not ok:
                        stuck = True
                        break
                    a, b = ok[int(rng.integers(len(ok)))]
                    u, v = points[a], points[b]
                    break
            if stuck:
                break
            nbrs[u].add(v)
            nbrs[v].add(u)
            for idx in sorted((a, b), reverse=True):
                m -= 1
                points[idx] = points[m]
            del points[m:]
        if not stuck:
            adj = np.zeros((n, n))
            for u in range(n):
                adj[u, list(nbrs[u])] = 1.0
            return adj
    raise GenerationTimeoutError(f"pairing failed after {max_restarts} restarts for n={n}, d={d}")


def random_regular_graph(n: int, d: int, seed=None, max_restarts: int = 1000) -> RegularGraph:
    """Sample a simple ``d``-regular graph on ``n`` vertices.

    ``seed`` may be an int, a :class:`numpy.random.SeedSequence` or a
    :class:`numpy.random.Generator` (consumed in place).
    """
    _check_params(n, d)
    rng = np.random.default_rng(seed)
    if d > (n - 1) / 2:
        adj = 1.0 - np.eye(n) - _pairing(n, n - 1 - d, rng, max_restarts)
    else:
        adj = _pairing(n, d, rng, max_restarts)
    return RegularGraph(n, d, adj)


def ramanujan_verdict(g: RegularGraph) -> RamanujanVerdict:
    """Check ``max(|mu| : mu < d) <= 2 sqrt(d-1)`` on the adjacency spectrum."""
    mu = np.linalg.eigvalsh(g.adjacency)[::-1].copy()
    threshold = 2.0 * sqrt(g.d - 1)
    relevant = mu[mu < g.d - RAMANUJAN_TOL]
    worst = float(np.max(np.abs(relevant))) if relevant.size else 0.0
    mu.flags.writeable = False
    return RamanujanVerdict(
        is_ramanujan=worst <= threshold + RAMANUJAN_TOL,
        mu2=float(mu[1]),
        muN=float(mu[-1]),
        threshold=threshold,
        eigenvalues=mu,
    )


def sample_ramanujan(n: int, d: int, seed=None, max_attempts: int = 100) -> RamanujanSample:
    """Draw regular graphs until one is connected, non-bipartite and Ramanujan.

    Bipartite draws (periodic ``G/d``) and disconnected draws are rejected
    by the diagnostics step, before the spectrum is computed.
    """
    _check_params(n, d)
    rng = np.random.default_rng(seed)
    spectral_rejections = 0
    for attempt in range(1, max_attempts + 1):
        g = random_regular_graph(n, d, rng)
        a = g.comm_matrix()
        diag = diagnostics(a)
        if not (diag.irreducible and diag.aperiodic):
            continue
        verdict = ramanujan_verdict(g)
        if not verdict.is_ramanujan:
            spectral_rejections += 1
            continue
        spectrum = SpectrumReport.from_eigenvalues(verdict.eigenvalues / d)
        return RamanujanSample(g, a, verdict, spectrum, attempt, spectral_rejections)
    raise GenerationTimeoutError(
        f"no irreducible aperiodic Ramanujan {d}-regular graph on {n} vertices "
        f"in {max_attempts} attempts"
    )


def generate_comm_matrix(n: int, d: int, seed=None, max_attempts: int = 100) -> StochasticMatrix:
    """Communication matrix ``G/d`` of a random irreducible aperiodic Ramanujan graph."""
    return sample_ramanujan(n, d, seed, max_attempts).matrix
