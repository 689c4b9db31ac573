import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from collabest.errors import ConvergenceError, NoTotalSupportError
from collabest.matrices import build_named, diagnostics
from collabest.sinkhorn import SupportMatrix, has_total_support, sinkhorn_knopp


def total_support_by_permutations(g):
    """Every positive entry covered by a positive permutation diagonal (enumeration)."""
    n = g.shape[0]
    covered = np.zeros((n, n), dtype=bool)
    for perm in itertools.permutations(range(n)):
        if all(g[i, perm[i]] > 0 for i in range(n)):
            covered[np.arange(n), perm] = True
    return bool(np.all(covered[g > 0]))


def test_identity_support():
    assert has_total_support(np.eye(3))


def test_triangular_lacks_total_support():
    assert not has_total_support([[1, 1], [0, 1]])


def test_full_support():
    assert has_total_support(np.ones((5, 5)))


@given(arrays(np.int8, st.tuples(st.integers(1, 5), st.integers(1, 5)).map(lambda s: (s[0], s[0])),
              elements=st.integers(0, 1)))
@settings(max_examples=200, deadline=None)
def test_total_support_matches_enumeration(g):
    assert has_total_support(g) == total_support_by_permutations(g)


def test_already_bistochastic_is_fixed_point():
    a1 = build_named("tridiag_a1", 6).entries
    res = sinkhorn_knopp(a1)
    np.testing.assert_allclose(res.d1, 1.0)
    np.testing.assert_allclose(res.d2, 1.0)
    np.testing.assert_allclose(res.balanced.entries, a1, atol=1e-15)
    assert res.iterations == 1


def test_two_by_two():
    # symmetric, so the unique balancing is symmetric with equal rows: [[2/3, 1/3], [1/3, 2/3]]
    res = sinkhorn_knopp([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(res.balanced.entries, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-10)
    np.testing.assert_allclose(res.d1, res.d2, atol=1e-10)


def test_a1_support_balancing():
    g = (build_named("tridiag_a1", 4).entries > 0).astype(float)
    res = sinkhorn_knopp(g, tol=1e-12)
    b = res.balanced.entries
    assert np.max(np.abs(b.sum(axis=0) - 1)) <= 1e-12
    assert np.max(np.abs(b.sum(axis=1) - 1)) <= 1e-12
    assert res.residual <= 1e-12
    assert np.array_equal(b > 0, g > 0)
    np.testing.assert_allclose(b, g / 2, atol=1e-12)  # every row and column has two entries
    np.testing.assert_allclose(res.d1[:, None] * g * res.d2[None, :], b, atol=1e-12)


def test_refuses_without_total_support():
    with pytest.raises(NoTotalSupportError):
        sinkhorn_knopp([[1, 1], [0, 1]])
    with pytest.raises(NoTotalSupportError):
        sinkhorn_knopp([[1, 0], [1, 0]])


def test_non_convergence():
    g = np.array([[1.0, 1e-6, 0], [1, 1, 1], [0, 1e-6, 1.0]])
    with pytest.raises(ConvergenceError):
        sinkhorn_knopp(g, tol=1e-14, max_iter=2)


def test_support_from_graph():
    g = build_named("tridiag_a2", 5).graph()
    s = SupportMatrix.from_graph(g)
    assert s.n == 5
    np.testing.assert_array_equal(s.entries, build_named("tridiag_a2", 5).entries > 0)


@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
@settings(max_examples=300, deadline=None)
def test_balancing_properties_random_positive_diagonal(n, seed):
    rng = np.random.default_rng(seed)
    g = rng.random((n, n)) * (rng.random((n, n)) < 0.5)
    g[np.arange(n), np.arange(n)] += 0.5  # positive diagonal
    if not has_total_support(g):
        with pytest.raises(NoTotalSupportError):
            sinkhorn_knopp(g)
        return
    res = sinkhorn_knopp(g)
    b = res.balanced
    assert diagnostics(b).bistochastic
    assert res.residual <= 1e-10
    assert np.array_equal(b.entries > 0, g > 0)


@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_symmetric_input_symmetric_output(n, seed):
    rng = np.random.default_rng(seed)
    g = rng.random((n, n)) + 0.1
    g = g + g.T
    res = sinkhorn_knopp(g, tol=1e-12)
    np.testing.assert_allclose(res.d1, res.d2, rtol=1e-8)
    np.testing.assert_allclose(res.balanced.entries, res.balanced.entries.T, atol=1e-10)
    assert diagnostics(res.balanced).bistochastic
