import itertools
from math import sqrt

import numpy as np
import pytest

from collabest.errors import DomainError, GenerationTimeoutError, InfeasibleParametersError
from collabest.matrices import diagnostics
from collabest.ramanujan import (
    RegularGraph,
    generate_comm_matrix,
    ramanujan_verdict,
    random_regular_graph,
    sample_ramanujan,
)
from collabest.spectral import sym_eigenvalues


def all_regular_graphs(n, d):
    pairs = list(itertools.combinations(range(n), 2))
    found = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        adj = np.zeros((n, n))
        for b, (u, v) in zip(bits, pairs):
            adj[u, v] = adj[v, u] = b
        if np.all(adj.sum(axis=1) == d):
            found.append(adj)
    return found


def assert_simple_regular(g: RegularGraph):
    adj = g.adjacency
    assert np.array_equal(adj, adj.T)
    assert np.all(np.diag(adj) == 0)
    assert np.isin(adj, (0, 1)).all()
    assert np.all(adj.sum(axis=1) == g.d)


def test_k4_is_the_only_cubic_graph_on_four_vertices():
    graphs = all_regular_graphs(4, 3)
    assert len(graphs) == 1
    k4 = graphs[0]
    for seed in range(5):
        np.testing.assert_array_equal(random_regular_graph(4, 3, seed).adjacency, k4)


@pytest.mark.parametrize("n,d", [(16, 3), (10, 4), (30, 5), (12, 9), (40, 21), (9, 8)])
def test_generated_graphs_are_simple_regular(n, d):
    for seed in range(5):
        assert_simple_regular(random_regular_graph(n, d, seed))


def test_small_graph_sampler_covers_all_labelled_graphs():
    # 3-regular graphs on 6 labelled vertices: 70 in total (K_{3,3}: 10, prism: 60)
    graphs = all_regular_graphs(6, 3)
    assert len(graphs) == 70
    rng = np.random.default_rng(0)
    seen = {random_regular_graph(6, 3, rng).adjacency.tobytes() for _ in range(3000)}
    assert len(seen) == 70


@pytest.mark.parametrize("n,d", [(5, 3), (4, 4), (6, 7), (7, 2), (3, 1)])
def test_infeasible_parameters(n, d):
    with pytest.raises(InfeasibleParametersError):
        random_regular_graph(n, d, 0)


def test_same_seed_same_graph():
    a = random_regular_graph(50, 3, 99).adjacency
    b = random_regular_graph(50, 3, 99).adjacency
    np.testing.assert_array_equal(a, b)


def test_regular_graph_validation():
    with pytest.raises(DomainError):
        RegularGraph(3, 2, np.ones((3, 3)))
    with pytest.raises(DomainError):
        RegularGraph(4, 2, [[0, 1, 1, 0], [1, 0, 0, 0], [1, 0, 0, 1], [0, 0, 1, 0]])


def test_k4_verdict():
    v = ramanujan_verdict(random_regular_graph(4, 3, 1))
    np.testing.assert_allclose(v.eigenvalues, [3, -1, -1, -1], atol=1e-12)
    assert v.is_ramanujan
    assert v.threshold == pytest.approx(2 * sqrt(2))


def test_four_cycle_verdict():
    c4 = np.array([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]])
    v = ramanujan_verdict(RegularGraph(4, 2, c4))
    # cycle spectrum 2 cos(2 pi k / 4)
    np.testing.assert_allclose(v.eigenvalues, [2, 0, 0, -2], atol=1e-12)
    assert v.is_ramanujan and v.muN == pytest.approx(-2)
    assert diagnostics(RegularGraph(4, 2, c4).comm_matrix()).period == 2


def prism(m):
    adj = np.zeros((2 * m, 2 * m))
    for i in range(m):
        for off in (0, m):
            j = (i + 1) % m
            adj[i + off, j + off] = adj[j + off, i + off] = 1
        adj[i, i + m] = adj[i + m, i] = 1
    return RegularGraph(2 * m, 3, adj)


def test_cube_is_not_ramanujan():
    # Q3 is bipartite: spectrum {3, 1, 1, 1, -1, -1, -1, -3}
    adj = np.array([[bin(u ^ v).count("1") == 1 for v in range(8)] for u in range(8)], dtype=float)
    v = ramanujan_verdict(RegularGraph(8, 3, adj))
    np.testing.assert_allclose(v.eigenvalues, [3, 1, 1, 1, -1, -1, -1, -3], atol=1e-12)
    assert not v.is_ramanujan


@pytest.mark.parametrize("m,expected", [(7, True), (20, False)])
def test_prism_verdict(m, expected):
    # C_m x K_2 has mu2 = 1 + 2 cos(2 pi / m)
    v = ramanujan_verdict(prism(m))
    assert v.mu2 == pytest.approx(1 + 2 * np.cos(2 * np.pi / m), abs=1e-12)
    assert v.is_ramanujan is expected


def test_generate_k4():
    a = generate_comm_matrix(4, 3, 0)
    np.testing.assert_allclose(a.entries, (np.ones((4, 4)) - np.eye(4)) / 3)
    d = diagnostics(a)
    assert d.irreducible and d.period == 1


def test_generate_n16_d3():
    s = sample_ramanujan(16, 3, 7)
    d = diagnostics(s.matrix)
    assert d.symmetric and d.bistochastic and d.irreducible and d.aperiodic
    assert d.complexity_index == 3
    assert s.verdict.is_ramanujan
    assert s.spectrum.gamma_max <= 2 * sqrt(2) / 3 + 1e-9
    # the report built from the adjacency spectrum agrees with a direct eigensolve
    direct = sym_eigenvalues(s.matrix)
    np.testing.assert_allclose(s.spectrum.eigenvalues, direct.eigenvalues, atol=1e-12)
    assert s.spectrum.s_coefficient == pytest.approx(direct.s_coefficient, rel=1e-12)


@pytest.mark.parametrize("n,d", [(200, 5), (60, 3), (64, 4)])
def test_s_coefficient_bounds(n, d):
    for seed in range(3):
        s = sample_ramanujan(n, d, seed).spectrum.s_coefficient
        assert n - 1 - 1e-9 <= s <= (n - 1) / (1 - 4 * (d - 1) / d**2) + 1e-9


def test_generation_timeout():
    with pytest.raises(GenerationTimeoutError):
        sample_ramanujan(6, 3, 0, max_attempts=0)


def test_bipartite_draws_are_rejected():
    for seed in range(10):
        s = sample_ramanujan(6, 3, seed)
        assert s.verdict.muN > -3 + 1e-9  # never K_{3,3}


@pytest.mark.parametrize("n", [50, 100, 200])
def test_most_cubic_graphs_are_ramanujan(n):
    rng = np.random.default_rng(2024 + n)
    accepted = 0
    samples = 100
    for _ in range(samples):
        g = random_regular_graph(n, 3, rng)
        accepted += ramanujan_verdict(g).is_ramanujan
    assert accepted / samples > 0.5
