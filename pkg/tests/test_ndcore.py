"""Matrix/vector kernel: goldens, error contracts, algebraic properties."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desknum import ndcore
from desknum.errors import (
    DivisionByZero,
    EmptyInput,
    NonFinite,
    RelativeUndefined,
    ShapeMismatch,
    SizeMismatch,
    ZeroNorm,
)
from desknum.ndcore import Matrix, Vector

finite_floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def assert_matrix_close(m: Matrix, rows, tol=1e-12):
    got = m.to_rows()
    assert len(got) == len(rows)
    for ra, rb in zip(got, rows):
        assert len(ra) == len(rb)
        for x, y in zip(ra, rb):
            assert abs(x - y) <= tol, (got, rows)


# construction and accessors


def test_matrix_rejects_non_finite():
    with pytest.raises(NonFinite):
        Matrix(1, 2, [1.0, float("nan")])
    with pytest.raises(NonFinite):
        Matrix.from_rows([[1.0, float("inf")]])
    with pytest.raises(NonFinite):
        Vector([float("-inf")])


def test_matrix_rejects_bad_shape():
    with pytest.raises(SizeMismatch):
        Matrix(2, 2, [1.0, 2.0, 3.0])
    with pytest.raises(ShapeMismatch):
        Matrix.from_rows([[1.0, 2.0], [3.0]])
    with pytest.raises(ShapeMismatch):
        Matrix(0, 3, [])
    with pytest.raises(EmptyInput):
        Vector([])


def test_matrix_accessors():
    m = Matrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert m.get(1, 2) == 6.0
    assert m.row(0) == [1.0, 2.0, 3.0]
    assert m.col(1) == [2.0, 5.0]
    assert Matrix.identity(2).to_rows() == [[1.0, 0.0], [0.0, 1.0]]


# element-wise ops and reductions


def test_ew_add_golden():
    a = Matrix(1, 3, [1, 2, 3])
    b = Matrix(1, 3, [4, 5, 6])
    assert ndcore.ew_binary(a, b, "add").data == [5.0, 7.0, 9.0]


def test_ew_mul_golden():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[5, 6], [7, 8]])
    assert_matrix_close(ndcore.ew_binary(a, b, "mul"), [[5, 12], [21, 32]])


def test_ew_scalar_broadcast():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    assert_matrix_close(ndcore.ew_binary(a, 2, "mul"), [[2, 4], [6, 8]])
    assert_matrix_close(ndcore.ew_binary(a, 2, "div"), [[0.5, 1], [1.5, 2]])


def test_ew_errors():
    a = Matrix(1, 2, [1, 2])
    with pytest.raises(ShapeMismatch):
        ndcore.ew_binary(a, Matrix(2, 1, [1, 2]), "add")
    with pytest.raises(DivisionByZero):
        ndcore.ew_binary(a, Matrix(1, 2, [1, 0]), "div")
    with pytest.raises(DivisionByZero):
        ndcore.ew_binary(a, 0, "div")


def test_reduce_golden():
    v = Vector([1, -2, 3, 4])
    assert ndcore.reduce(v, "sum") == 6.0
    assert ndcore.reduce(v, "mean") == 1.5
    assert ndcore.reduce(v, "max") == 4.0
    assert ndcore.reduce(v, "min") == -2.0
    with pytest.raises(EmptyInput):
        ndcore.reduce([], "sum")


# matrix multiplication


def test_matmul_square_golden():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[5, 6], [7, 8]])
    assert_matrix_close(ndcore.matmul(a, b), [[19, 22], [43, 50]])


def test_matmul_rect_golden():
    a = Matrix.from_rows([[1, 2, 3], [4, 5, 6]])
    b = Matrix.from_rows([[7, 8], [9, 10], [11, 12]])
    assert_matrix_close(ndcore.matmul(a, b), [[58, 64], [139, 154]])


def test_matmul_shape_error():
    with pytest.raises(ShapeMismatch):
        ndcore.matmul(Matrix(2, 3, range(6)), Matrix(2, 3, range(6)))


def test_strassen_matches_naive_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a = rng.standard_normal((16, 16))
        b = rng.standard_normal((16, 16))
        ma = Matrix.from_rows(a.tolist())
        mb = Matrix.from_rows(b.tolist())
        got = ndcore.matmul(ma, mb, algo="strassen")
        want = a @ b
        assert np.max(np.abs(np.array(got.to_rows()) - want)) <= 1e-9


def test_strassen_rectangular_and_above_cutoff():
    rng = np.random.default_rng(11)
    for shape in [(5, 7, 3), (33, 40, 37), (64, 64, 64)]:
        m, k, n = shape
        a = rng.standard_normal((m, k))
        b = rng.standard_normal((k, n))
        got = ndcore.matmul(Matrix.from_rows(a.tolist()), Matrix.from_rows(b.tolist()), algo="strassen")
        assert got.rows == m and got.cols == n
        assert np.max(np.abs(np.array(got.to_rows()) - a @ b)) <= 1e-8


# transpose / reshape


def test_transpose_golden():
    m = Matrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert ndcore.transpose(m).to_rows() == [[1, 4], [2, 5], [3, 6]]


@given(
    st.integers(min_value=1, max_value=6),
    st.integers(min_value=1, max_value=6),
    st.data(),
)
@settings(deadline=None, max_examples=50)
def test_transpose_involution(r, c, data):
    flat = data.draw(st.lists(finite_floats, min_size=r * c, max_size=r * c))
    m = Matrix(r, c, flat)
    assert ndcore.transpose(ndcore.transpose(m)) == m


def test_reshape_row_major():
    m = Matrix(2, 3, [1, 2, 3, 4, 5, 6])
    r = ndcore.reshape(m, 3, 2)
    assert r.to_rows() == [[1, 2], [3, 4], [5, 6]]
    assert r.data == m.data
    with pytest.raises(SizeMismatch):
        ndcore.reshape(m, 4, 2)


# vector geometry


def test_dot_cross_golden():
    assert ndcore.dot([1, 2, 3], [4, 5, 6]) == 32.0
    assert ndcore.cross3([1, 2, 3], [4, 5, 6]).data == [-3.0, 6.0, -3.0]
    with pytest.raises(ShapeMismatch):
        ndcore.dot([1, 2], [1, 2, 3])
    with pytest.raises(ShapeMismatch):
        ndcore.cross3([1, 2], [1, 2, 3])


@given(st.lists(finite_floats, min_size=3, max_size=3), st.lists(finite_floats, min_size=3, max_size=3))
@settings(deadline=None, max_examples=50)
def test_cross_orthogonal_to_inputs(a, b):
    c = ndcore.cross3(a, b)
    scale = max(1.0, ndcore.norm(a) * ndcore.norm(b))
    assert abs(ndcore.dot(a, c)) <= 1e-6 * scale
    assert abs(ndcore.dot(b, c)) <= 1e-6 * scale


# norms, similarity, distance


def test_norm_goldens():
    assert ndcore.norm([1, -2, 3], "l1") == 6.0
    assert abs(ndcore.norm([1, 2, 3], "l2") - 3.7416573867739413) <= 1e-15
    frob = ndcore.norm(Matrix.from_rows([[1, 2], [3, 4]]), "frobenius")
    assert abs(frob - 5.477225575051661) <= 1e-15


def test_cosine_and_distance_goldens():
    cs = ndcore.cosine_similarity([1, 2, 3], [4, 5, 6])
    assert abs(cs - 0.9746318461970762) <= 1e-15
    d = ndcore.euclidean_distance([1, 2, 3], [4, 5, 6])
    assert abs(d - 5.196152422706632) <= 1e-15
    with pytest.raises(ZeroNorm):
        ndcore.cosine_similarity([0, 0], [1, 2])


@given(st.lists(finite_floats, min_size=1, max_size=8))
@settings(deadline=None, max_examples=50)
def test_norm_squared_is_self_dot(v):
    n2 = ndcore.norm(v, "l2") ** 2
    assert abs(n2 - ndcore.dot(v, v)) <= 1e-6 * max(1.0, n2)


# magnitudes below ~1e-154 underflow when squared, so keep clear of them
nonunderflow_floats = st.one_of(
    st.just(0.0),
    st.floats(min_value=1e-100, max_value=1e6),
    st.floats(min_value=-1e6, max_value=-1e-100),
)


@given(st.lists(nonunderflow_floats, min_size=1, max_size=8))
@settings(deadline=None, max_examples=50)
def test_norm_zero_iff_zero_vector(v):
    n = ndcore.norm(v, "l2")
    assert n >= 0.0
    assert (n == 0.0) == all(x == 0.0 for x in v)


def test_cosine_bounds_against_numpy():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.standard_normal(5)
        b = rng.standard_normal(5)
        cs = ndcore.cosine_similarity(a.tolist(), b.tolist())
        want = float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
        assert abs(cs - want) <= 1e-12
        assert -1.0 - 1e-12 <= cs <= 1.0 + 1e-12


# error metrics


def test_error_metrics_golden():
    pair = ndcore.error_metrics(math.pi, 22 / 7)
    assert pair.absolute == 0.0012644892673496777
    # relative follows the definition exactly; the commonly quoted constant
    # 0.000402499... is only good to six significant digits
    assert pair.relative == pair.absolute / math.pi
    assert abs(pair.relative - 0.000402499) <= 5e-9


def test_error_metrics_exact_self():
    pair = ndcore.error_metrics(2.5, 2.5)
    assert pair.absolute == 0.0 and pair.relative == 0.0


def test_error_metrics_zero_exact():
    with pytest.raises(RelativeUndefined):
        ndcore.error_metrics(0.0, 1.0)
