import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sheafstatics import numerics
from sheafstatics.errors import ImageNotInKernel, NonFiniteInput
from sheafstatics.numerics import Tolerance

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        Tolerance(relative=0.0)
    with pytest.raises(ValueError):
        Tolerance(absolute=-1.0)


def test_zero_matrix_kernel_is_identity():
    K = numerics.kernel_basis(np.zeros((2, 2)))
    assert K.shape == (2, 2)
    assert np.allclose(K.T @ K, np.eye(2))


def test_identity_kernel_is_empty():
    assert numerics.kernel_basis(np.eye(3)).shape == (3, 0)


def test_nonfinite_rejected():
    with pytest.raises(NonFiniteInput):
        numerics.kernel_basis(np.array([[np.nan, 1.0]]))
    with pytest.raises(NonFiniteInput):
        numerics.least_squares_solve(np.eye(2), [np.inf, 0.0])


def test_quotient_of_plane_by_axis():
    Q = numerics.quotient_basis(np.eye(2), np.array([[1.0], [0.0]]))
    assert Q.shape == (2, 1)
    assert np.allclose(np.abs(Q[:, 0]), [0.0, 1.0])


def test_quotient_by_zero_image_keeps_kernel():
    assert numerics.quotient_basis(np.eye(2), np.zeros((2, 1))).shape == (2, 2)


def test_image_outside_kernel_raises():
    K = np.array([[1.0], [0.0]])
    with pytest.raises(ImageNotInKernel):
        numerics.quotient_basis(K, np.array([[0.0], [1.0]]))


def test_least_squares_identity():
    b = np.array([3.0, -1.0, 2.0])
    x, r = numerics.least_squares_solve(np.eye(3), b)
    assert np.allclose(x, b) and r < 1e-14


def test_least_squares_orthogonal_target():
    x, r = numerics.least_squares_solve(np.array([[1.0], [1.0]]), [1.0, -1.0])
    assert abs(x[0]) < 1e-14
    assert r == pytest.approx(np.sqrt(2))


@settings(max_examples=60, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_rank_nullity(M):
    K = numerics.kernel_basis(M)
    assert numerics.rank(M) + K.shape[1] == M.shape[1]
    if K.shape[1]:
        assert np.allclose(K.T @ K, np.eye(K.shape[1]), atol=1e-10)
        assert np.linalg.norm(M @ K) <= 1e-8 * max(1.0, np.linalg.norm(M))


@settings(max_examples=40, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=finite), st.randoms())
def test_dimensions_survive_permutation(M, rnd):
    rows = list(range(M.shape[0]))
    cols = list(range(M.shape[1]))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    P = M[rows][:, cols]
    assert numerics.rank(P) == numerics.rank(M)
    assert numerics.kernel_basis(P).shape[1] == numerics.kernel_basis(M).shape[1]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 3), st.integers(0, 10_000))
def test_quotient_dimension(n, k, seed):
    rng = np.random.default_rng(seed)
    K = np.linalg.qr(rng.normal(size=(n + 2, n)))[0]
    G = K @ rng.normal(size=(n, min(k, n)))
    Q = numerics.quotient_basis(K, G)
    assert Q.shape[1] == n - numerics.rank(G) if G.size else n
    if Q.shape[1] and G.size:
        assert np.abs(Q.T @ G).max() < 1e-9
