from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ohk.errors import DimensionLimitError, FieldMismatchError, ShapeError
from ohk.exactlin import GF, QQ, Field, Matrix, Subspace, kernel_basis, permutation_matrix, swap_matrix, tensor

small = st.integers(-3, 3)


def matrices(rows, cols, field=QQ):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda r: Matrix(field, r))


@st.composite
def any_matrix(draw, field=QQ, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return draw(matrices(r, c, field))


def test_field_parse_and_arith():
    assert Field.parse("Q") == QQ
    f5 = Field.parse("F5")
    assert f5 == GF(5)
    assert f5.reduce(7) == 2
    assert f5.inv(2) == 3
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    with pytest.raises(Exception):
        Field.parse("F4")


def test_mixed_fields_refused():
    with pytest.raises(FieldMismatchError):
        Matrix(QQ, [[1]]) @ Matrix(GF(3), [[1]])


def test_shape_errors():
    with pytest.raises(ShapeError):
        Matrix(QQ, [[1, 2]]) @ Matrix(QQ, [[1, 2]])
    with pytest.raises(ShapeError):
        Matrix(QQ, [[1, 2], [3]])


def test_inverse_and_solve():
    m = Matrix(QQ, [[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(QQ, 2)
    rhs = Matrix(QQ, [[3], [2]])
    assert m.solve(rhs) == Matrix(QQ, [[1], [1]])
    assert Matrix(QQ, [[1, 1], [1, 1]]).solve(Matrix(QQ, [[1], [0]])) is None


def test_rank_over_f2_differs_from_q():
    rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert Matrix(QQ, rows).rank() == 3
    assert Matrix(GF(2), rows).rank() == 2


def test_swap_matrix_exchanges_factors():
    s = swap_matrix(QQ, 2, 3)
    a, b = Matrix(QQ, [[1, 2], [3, 4]]), Matrix(QQ, [[1, 0, 1], [0, 2, 0], [5, 0, 1]])
    assert s @ tensor(a, b) == tensor(b, a) @ s


def test_permutation_matrix_is_orthogonal():
    p = permutation_matrix(QQ, [2, 0, 1])
    assert p @ p.T == Matrix.identity(QQ, 3)


def test_dimension_cap():
    with pytest.raises(DimensionLimitError):
        tensor(Matrix.identity(QQ, 64), Matrix.identity(QQ, 65))


def test_subspace_quotient_section():
    s = Subspace.span(QQ, 3, [(1, -1, 0)])
    q = s.quotient_map()
    assert q.shape == (2, 3)
    assert all(not any(q.apply(v)) for v in s.basis)
    assert q @ s.section() == Matrix.identity(QQ, 2)


@settings(max_examples=40, deadline=None)
@given(any_matrix(), any_matrix(), any_matrix(), any_matrix())
def test_tensor_functorial(a, b, c, d):
    if a.cols != c.rows or b.cols != d.rows:
        c = Matrix.identity(QQ, a.cols)
        d = Matrix.identity(QQ, b.cols)
    assert tensor(a, b) @ tensor(c, d) == tensor(a @ c, b @ d)


@settings(max_examples=60, deadline=None)
@given(any_matrix(max_dim=5), st.sampled_from([QQ, GF(2), GF(3), GF(7)]))
def test_rank_nullity(m, field):
    m = Matrix(field, [list(r) for r in m.to_lists()])
    k = kernel_basis(m)
    assert k.dim + m.rank() == m.cols
    for v in k.basis:
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.lists(small, min_size=n, max_size=n), max_size=4))))
def test_quotient_kills_exactly_the_subspace(data):
    n, vecs = data
    s = Subspace.span(QQ, n, vecs)
    q = s.quotient_map()
    assert q.rank() == n - s.dim
    assert kernel_basis(q) == s
    if n > s.dim:
        assert q @ s.section() == Matrix.identity(QQ, n - s.dim)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), max_size=3),
       st.lists(st.lists(small, min_size=3, max_size=3), max_size=3))
def test_intersection_and_sum_dims(u, w):
    a, b = Subspace.span(QQ, 3, u), Subspace.span(QQ, 3, w)
    assert (a + b).dim + a.intersect(b).dim == a.dim + b.dim
    assert a.intersect(b) <= a and a <= a + b


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), max_size=4))
def test_rref_basis_is_canonical(vecs):
    s = Subspace.span(QQ, 4, vecs)
    again = Subspace.span(QQ, 4, list(reversed(s.vectors())) + vecs)
    assert s == again and s.basis == again.basis
