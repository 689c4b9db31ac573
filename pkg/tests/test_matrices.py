from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings

from collabest.errors import DimensionError, DomainError, IsolatedNodeError, NotStochasticError
from collabest.matrices import (
    CommGraph,
    StochasticMatrix,
    build_equal_neighbor,
    build_h_alpha,
    build_named,
    diagnostics,
    matrix_power_frobenius_sq,
)

from conftest import stochastic_matrices


def reachability_oracle(support):
    """Irreducible iff (I + S)^(n-1) has no zero entry, via boolean products."""
    n = support.shape[0]
    r = np.eye(n, dtype=bool) | support
    for _ in range(n):
        r = (r.astype(int) @ (np.eye(n, dtype=bool) | support).astype(int)) > 0
    return bool(r.all())


def period_oracle(support):
    """gcd of all k <= 3n^2 with (S^k)_{00} > 0 (return times of node 0)."""
    n = support.shape[0]
    p = np.eye(n, dtype=bool)
    g = 0
    for k in range(1, 3 * n * n + 1):
        p = (p.astype(int) @ support.astype(int)) > 0
        if p[0, 0]:
            g = gcd(g, k)
    return g


def test_a1_n3_exact_rows():
    a = build_named("tridiag_a1", 3)
    np.testing.assert_array_equal(a.entries, [[0.5, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0.5]])


def test_identity():
    np.testing.assert_array_equal(build_named("identity", 4).entries, np.eye(4))


@pytest.mark.parametrize("n", [3, 4, 10, 57])
def test_a2_is_affine_in_a1(n):
    a1 = build_named("tridiag_a1", n).entries
    a2 = build_named("tridiag_a2", n).entries
    np.testing.assert_allclose(3 * a2, 2 * a1 + np.eye(n), rtol=0, atol=1e-15)


def test_star_shape():
    a = build_named("star_a3", 4).entries
    np.testing.assert_allclose(a[0], 0.25)
    np.testing.assert_allclose(a[1], [0.25, 0.75, 0, 0])
    np.testing.assert_allclose(a[3], [0.25, 0, 0, 0.75])


@pytest.mark.parametrize("kind", ["identity", "full", "tridiag_a1", "tridiag_a2", "star_a3"])
@pytest.mark.parametrize("n", [3, 7, 64])
def test_builders_are_stochastic(kind, n):
    a = build_named(kind, n).entries
    assert np.all(a >= 0)
    assert np.max(np.abs(a.sum(axis=1) - 1)) <= 1e-12


def test_too_small_dimensions():
    with pytest.raises(DimensionError):
        build_named("tridiag_a1", 2)
    with pytest.raises(DimensionError):
        build_named("full", 1)
    with pytest.raises(DomainError):
        build_named("nope", 4)


@pytest.mark.parametrize(
    "alpha,row", [(2, [0.5, 0.5]), (3, [1 / 3, 2 / 3]), (1.5, [2 / 3, 1 / 3])]
)
def test_h_alpha(alpha, row):
    h = build_h_alpha(alpha).entries
    np.testing.assert_allclose(h, [row, row], atol=1e-15)


@pytest.mark.parametrize("alpha", [1, 0.5, -2])
def test_h_alpha_domain(alpha):
    with pytest.raises(DomainError):
        build_h_alpha(alpha)


def test_validation_rejects_bad_input():
    with pytest.raises(NotStochasticError):
        StochasticMatrix([[0.5, 0.6], [0.5, 0.5]])
    with pytest.raises(NotStochasticError):
        StochasticMatrix([[1.5, -0.5], [0.5, 0.5]])
    with pytest.raises(DimensionError):
        StochasticMatrix([[1.0]])


def test_matrix_is_immutable():
    a = build_named("full", 3)
    with pytest.raises(ValueError):
        a.entries[0, 0] = 1.0


def test_equal_neighbor_complete_with_loops():
    g = CommGraph.undirected(3, [(0, 1), (1, 2), (0, 2)], self_loops=True)
    np.testing.assert_allclose(build_equal_neighbor(g).entries, 1 / 3)


def test_equal_neighbor_path_hand_count():
    g = CommGraph.undirected(3, [(0, 1), (1, 2)], self_loops=True)
    a = build_equal_neighbor(g).entries
    np.testing.assert_allclose(a[1], [1 / 3, 1 / 3, 1 / 3])
    np.testing.assert_allclose(a[0], [0.5, 0.5, 0])
    np.testing.assert_allclose(a[2], [0, 0.5, 0.5])


def test_equal_neighbor_on_a1_support():
    a1 = build_named("tridiag_a1", 3)
    assert build_equal_neighbor(a1.graph()) == a1


def test_equal_neighbor_isolated():
    with pytest.raises(IsolatedNodeError):
        build_equal_neighbor(CommGraph(3, frozenset({(0, 1), (1, 0)})))


def test_graph_edges_follow_sender_to_receiver():
    a = StochasticMatrix([[1.0, 0.0], [0.5, 0.5]])
    g = a.graph()
    # a[1, 0] > 0: node 0 sends to node 1
    assert (0, 1) in g.edges and (1, 0) not in g.edges
    assert g.directed
    assert g.in_neighbors(1) == [0, 1]


def test_diagnostics_a1():
    d = diagnostics(build_named("tridiag_a1", 10))
    assert d.irreducible and d.period == 1 and d.bistochastic and d.symmetric
    assert d.complexity_index == 3


def test_diagnostics_a2_complexity():
    assert diagnostics(build_named("tridiag_a2", 10)).complexity_index == 4


def test_diagnostics_a3_complexity():
    assert diagnostics(build_named("star_a3", 10)).complexity_index == 11


def test_three_cycle_period():
    p = StochasticMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    d = diagnostics(p)
    assert d.irreducible and d.period == 3
    assert d.complexity_index == 1  # directed support, no loops


def test_reducible_has_no_period():
    d = diagnostics(build_named("identity", 4))
    assert not d.irreducible and d.period is None and not d.aperiodic


@pytest.mark.parametrize("n", [2, 3, 9, 40])
def test_full_matrix_is_ergodic_bistochastic(n):
    d = diagnostics(build_named("full", n))
    assert d.irreducible and d.aperiodic and d.bistochastic


@pytest.mark.parametrize("n", [2, 5, 8])
def test_single_cycle_period_is_length(n):
    perm = np.roll(np.eye(n), 1, axis=1)
    assert diagnostics(StochasticMatrix(perm)).period == n


@given(stochastic_matrices(max_n=7))
@settings(max_examples=150, deadline=None)
def test_diagnostics_match_brute_force(a):
    s = a.support
    d = diagnostics(a)
    assert d.irreducible == reachability_oracle(s)
    if d.irreducible:
        assert d.period == period_oracle(s)
        if np.any(np.diag(s)):
            assert d.period == 1
    assert d.complexity_index <= a.n + 1


@given(stochastic_matrices(max_n=6, sparse=False))
@settings(max_examples=50, deadline=None)
def test_frobenius_power_bounds(a):
    for k in range(6):
        v = matrix_power_frobenius_sq(a, k)
        assert 1 - 1e-12 <= v <= a.n + 1e-12


def test_frobenius_examples():
    a = build_named("tridiag_a2", 6)
    assert matrix_power_frobenius_sq(a, 0) == 6
    assert matrix_power_frobenius_sq(build_named("identity", 5), 7) == 5
    assert matrix_power_frobenius_sq(build_named("full", 4), 1) == pytest.approx(1, abs=1e-15)


def test_equal_neighbor_symmetric_is_bistochastic(rng):
    for _ in range(20):
        n = int(rng.integers(3, 9))
        upper = np.triu(rng.random((n, n)) < 0.5, 1)
        adj = upper | upper.T
        # regular ring plus loops keeps the equal-neighbour matrix symmetric
        ring = [(i, (i + 1) % n) for i in range(n)]
        a = build_equal_neighbor(CommGraph.undirected(n, ring, self_loops=True))
        d = diagnostics(a)
        assert d.symmetric and d.bistochastic
        a_rand = build_equal_neighbor(CommGraph.undirected(n, zip(*np.nonzero(adj)), self_loops=True))
        d_rand = diagnostics(a_rand)
        if d_rand.symmetric:
            assert d_rand.bistochastic
