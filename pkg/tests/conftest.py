import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from collabest.matrices import StochasticMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def stochastic_from(raw: np.ndarray) -> StochasticMatrix:
    raw = np.asarray(raw, dtype=float)
    raw[raw.sum(axis=1) == 0, 0] = 1.0
    return StochasticMatrix(raw / raw.sum(axis=1, keepdims=True))


def metropolis(adj: np.ndarray) -> StochasticMatrix:
    """Symmetric stochastic matrix on an undirected graph (Metropolis-Hastings weights)."""
    adj = np.asarray(adj, dtype=float)
    deg = adj.sum(axis=1)
    n = adj.shape[0]
    a = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j and adj[i, j]:
                a[i, j] = 1.0 / (1.0 + max(deg[i], deg[j]))
    a[np.arange(n), np.arange(n)] = 1.0 - a.sum(axis=1)
    return StochasticMatrix(a)


@st.composite
def stochastic_matrices(draw, min_n=2, max_n=6, sparse=True):
    n = draw(st.integers(min_n, max_n))
    vals = draw(arrays(float, (n, n), elements=st.floats(0, 1, allow_nan=False)))
    if sparse:
        mask = draw(arrays(bool, (n, n)))
        vals = vals * mask
    return stochastic_from(vals)
