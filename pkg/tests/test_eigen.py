import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projbound.eigen import (ConvergenceError, eigenpairs, eigenpairs_batch, eigenvalues,
                             eigenvalues_batch, kyfan_bottom_sum, kyfan_top_sum)
from projbound.graphs import adjacency_matrix, complete_graph, icosahedron, union_cliques
from projbound.tolerances import ToleranceProfile


def random_symmetric(rng, n, scale=1.0):
    a = rng.uniform(-scale, scale, (n, n))
    return np.triu(a) + np.triu(a, 1).T


@pytest.mark.parametrize("m", [1, 2, 5, 9])
def test_complete_graph_spectrum(m):
    w = eigenvalues(adjacency_matrix(complete_graph(m)))
    np.testing.assert_allclose(w, [m - 1] + [-1] * (m - 1), atol=1e-12)


def test_union_cliques_lambda3():
    assert eigenvalues(adjacency_matrix(union_cliques(3, 4)))[2] == pytest.approx(3.0, abs=1e-12)


def test_icosahedron_repeated_sqrt5():
    # from the exact factorisation (x-5)(x+1)^5(x^2-5)^3
    w = eigenvalues(adjacency_matrix(icosahedron()))
    np.testing.assert_allclose(w[1:4], math.sqrt(5), atol=1e-9)


def test_eigenpairs_identity_and_diagonal():
    w, v = eigenpairs(np.eye(4))
    np.testing.assert_array_equal(w, np.ones(4))
    np.testing.assert_allclose(v @ v.T, np.eye(4), atol=1e-15)
    w, v = eigenpairs(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(w, [3.0, 2.0, 1.0])
    np.testing.assert_array_equal(np.abs(v), np.eye(3)[:, [0, 2, 1]])


@pytest.mark.parametrize("seed", range(20))
def test_eigenpairs_random_reconstruction(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 13))
    a = random_symmetric(rng, n)
    w, v = eigenpairs(a)
    assert np.all(np.diff(w) <= 0)
    np.testing.assert_allclose(v.T @ v, np.eye(n), atol=1e-10)
    assert np.max(np.linalg.norm(a @ v - v * w, axis=0)) < 1e-8
    assert np.max(np.abs(v @ np.diag(w) @ v.T - a)) < 1e-8
    # independent LAPACK oracle
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a)[::-1], atol=1e-10)


def test_random_8x8_reconstruction():
    a = random_symmetric(np.random.default_rng(8), 8)
    w, v = eigenpairs(a)
    assert np.max(np.abs(v @ np.diag(w) @ v.T - a)) < 1e-8


def test_non_symmetric_rejected():
    with pytest.raises(ValueError):
        eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        eigenvalues(np.zeros((2, 3)))


def test_sweep_cap_raises():
    a = random_symmetric(np.random.default_rng(0), 10)
    with pytest.raises(ConvergenceError):
        eigenvalues(a, ToleranceProfile(jacobi_max_sweeps=1))


def test_determinism_bitwise():
    a = random_symmetric(np.random.default_rng(3), 15)
    w1, v1 = eigenpairs(a)
    w2, v2 = eigenpairs(a)
    assert w1.tobytes() == w2.tobytes() and v1.tobytes() == v2.tobytes()


def test_batch_result_independent_of_batch_mates():
    rng = np.random.default_rng(11)
    stack = np.stack([random_symmetric(rng, 6) for _ in range(9)])
    full = eigenvalues_batch(stack)
    for i in range(9):
        assert eigenvalues_batch(stack[i:i + 1])[0].tobytes() == full[i].tobytes()
    w, v = eigenpairs_batch(stack)
    np.testing.assert_allclose(np.einsum("bij,bj,bkj->bik", v, w, v), stack, atol=1e-10)


def test_one_by_one():
    w, v = eigenpairs(np.array([[2.5]]))
    assert w.tolist() == [2.5] and v.tolist() == [[1.0]]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**32 - 1), st.floats(0.01, 100))
def test_trace_conservation(n, seed, scale):
    a = random_symmetric(np.random.default_rng(seed), n, scale)
    w = eigenvalues(a)
    assert abs(w.sum() - np.trace(a)) <= 1e-9 * (1 + np.abs(a).max() * n)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_weyl_inequality(n, seed):
    rng = np.random.default_rng(seed)
    x, y = random_symmetric(rng, n), random_symmetric(rng, n)
    lx, ly, lxy = eigenvalues(x), eigenvalues(y), eigenvalues(x + y)
    for i in range(1, n + 1):
        for j in range(n + 1 - i, n + 1):
            assert lx[i - 1] + ly[j - 1] <= lxy[i + j - n - 1] + 1e-9


def test_kyfan_sums_examples():
    assert kyfan_bottom_sum(eigenvalues(adjacency_matrix(complete_graph(4))), 2) == pytest.approx(-2, abs=1e-12)
    w = eigenvalues(adjacency_matrix(icosahedron()))
    assert kyfan_bottom_sum(w, 3) == pytest.approx(-3 * math.sqrt(5), abs=1e-9)
    s = 2 * np.eye(3) - np.ones((3, 3))
    assert kyfan_top_sum(eigenvalues(s), 2) == pytest.approx(4, abs=1e-12)
    assert kyfan_top_sum(eigenvalues(np.ones((6, 6))), 1) == pytest.approx(6, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_kyfan_complementary_sums(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    a = random_symmetric(rng, n)
    w = eigenvalues(a)
    assert kyfan_bottom_sum(w, n) == pytest.approx(np.trace(a), abs=1e-10)
    assert kyfan_top_sum(w, n) == pytest.approx(np.trace(a), abs=1e-10)
    for r in range(1, n):
        assert kyfan_bottom_sum(w, r) + kyfan_top_sum(w, n - r) == pytest.approx(np.trace(a), abs=1e-10)


@pytest.mark.parametrize("r", [0, 4])
def test_kyfan_rank_errors(r):
    with pytest.raises(ValueError):
        kyfan_bottom_sum([3.0, 2.0, 1.0], r)
    with pytest.raises(ValueError):
        kyfan_top_sum([3.0, 2.0, 1.0], r)
