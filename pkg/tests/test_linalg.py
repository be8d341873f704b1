import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratsurf import linalg
from ratsurf.field import field_of_order


def _matrices(draw, q):
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 8))
    vals = draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c)


@st.composite
def field_matrix(draw):
    q = draw(st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
    return q, _matrices(draw, q)


@given(field_matrix())
@settings(max_examples=150, deadline=None)
def test_rank_nullity(data):
    q, M = data
    F = field_of_order(q)
    K = linalg.kernel(M, F)
    assert linalg.rank(M, F) + K.shape[0] == M.shape[1]
    if K.size:
        assert not linalg.matmul(M, K.T, F).any()


@given(field_matrix())
@settings(max_examples=150, deadline=None)
def test_rref_keeps_row_space(data):
    q, M = data
    F = field_of_order(q)
    R, piv, _ = linalg.rref(M, F)
    assert linalg.rank(R, F) == len(piv)
    for row in M:
        assert linalg.in_row_space(row, R[: len(piv)], F)
    # pivot columns form an identity block
    for i, c in enumerate(piv):
        col = R[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1


@given(field_matrix(), st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_solve_left(data, seed):
    q, M = data
    F = field_of_order(q)
    x = np.random.default_rng(seed).integers(0, q, size=M.shape[0])
    v = linalg.matmul(x[None, :], M, F)[0]
    y = linalg.solve_left(M, v, F)
    assert y is not None
    assert np.array_equal(linalg.matmul(y[None, :], M, F)[0], v)


def test_solve_left_reports_inconsistency():
    F = field_of_order(3)
    M = np.array([[1, 0, 0], [0, 1, 0]])
    assert linalg.solve_left(M, np.array([0, 0, 1]), F) is None


def test_augmented_rref_tracks_row_operations():
    F = field_of_order(5)
    rng = np.random.default_rng(1)
    M = rng.integers(0, 5, size=(4, 7))
    R, piv, A = linalg.rref(M, F, aug=np.eye(4, dtype=np.int64))
    assert np.array_equal(linalg.matmul(A, M, F), R)


def test_column_order_controls_pivots():
    F = field_of_order(2)
    M = np.array([[1, 1, 0], [0, 1, 1]])
    _, piv, _ = linalg.rref(M, F, col_order=[2, 1, 0])
    assert piv == [2, 1]


def test_rref_rejects_vectors():
    with pytest.raises(ValueError):
        linalg.rref(np.array([1, 2]), field_of_order(3))


def test_dedupe_rows():
    F = field_of_order(7)
    M = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert linalg.dedupe_rows(M, F).shape == (2, 3)
