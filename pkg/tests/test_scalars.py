from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qhalg.scalars import (
    RATIONALS,
    Echelon,
    Field,
    FpElement,
    Matrix,
    inverse,
    kernel_of_rows,
    matrix_rank,
    row_reduce,
    solve,
)

small = st.integers(min_value=-3, max_value=3)


def dense(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return draw(dense(r, c))


FIELDS = [RATIONALS, Field(7), Field(2)]


def test_field_parse_and_str():
    assert Field.parse("Q") is RATIONALS
    f = Field.parse("Fp:101")
    assert f.p == 101 and str(f) == "Fp:101"
    with pytest.raises(ValueError):
        Field.parse("Fp:100")
    with pytest.raises(ValueError):
        Field.parse("R")


def test_rational_arithmetic_is_exact():
    q = RATIONALS
    x = q(1) / q(3)
    assert x * 3 == 1
    assert q("2/6") == Fraction(1, 3)


def test_prime_field_arithmetic():
    f = Field(7)
    assert f(3) * f(5) == f(1)
    assert f(3) / f(5) == f(2)
    assert -f(1) == f(6)
    assert f(Fraction(1, 2)) == f(4)
    assert not f(14)
    with pytest.raises(ZeroDivisionError):
        f(1) / f(0)


@pytest.mark.parametrize("fld", FIELDS, ids=str)
@given(data=matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(fld, data):
    m = Matrix.from_dense(data, fld)
    rr = row_reduce(m, fld)
    assert rr.rank + len(rr.kernel_basis) == m.ncols
    assert rr.rank == matrix_rank(m) == matrix_rank(m.T)
    for v in rr.kernel_basis:
        assert all(not x for x in m.apply({j: c for j, c in enumerate(v) if c}).values())


@given(data=matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_of_rows_annihilates(data):
    fld = RATIONALS
    rows = Matrix.from_dense(data, fld).rows
    ncols = len(data[0])
    ker = kernel_of_rows(rows, ncols, fld.one)
    assert len(ker) == ncols - matrix_rank(Matrix.from_dense(data, fld))
    for v in ker:
        for r in rows:
            assert sum((r.get(k, 0) * c for k, c in v.items()), fld.zero) == 0


@pytest.mark.parametrize("fld", FIELDS, ids=str)
@given(data=matrices(), xs=st.lists(small, min_size=5, max_size=5))
@settings(max_examples=60, deadline=None)
def test_solve_consistent_systems(fld, data, xs):
    m = Matrix.from_dense(data, fld)
    x0 = {j: fld(xs[j]) for j in range(m.ncols) if xs[j]}
    b = m.apply(x0)
    rhs = [b.get(i, fld.zero) for i in range(m.nrows)]
    x = solve(m, rhs, fld)
    assert x is not None
    got = m.apply({j: c for j, c in enumerate(x) if c})
    assert all(got.get(i, 0) == rhs[i] for i in range(m.nrows))


def test_solve_inconsistent_returns_none():
    m = Matrix.from_dense([[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is None


@given(n=st.integers(1, 4), data=st.data())
@settings(max_examples=60, deadline=None)
def test_inverse_round_trip(n, data):
    rows = data.draw(dense(n, n))
    m = Matrix.from_dense(rows)
    if matrix_rank(m) < n:
        with pytest.raises(ZeroDivisionError):
            inverse(m, RATIONALS.one)
        return
    assert inverse(m, RATIONALS.one) @ m == Matrix.identity(n, RATIONALS.one)


def test_echelon_tracks_coordinates():
    e = Echelon(track=True)
    assert e.add({0: 1, 1: 1}, tag="a")
    assert e.add({1: 1}, tag="b")
    assert not e.add({0: 2, 1: 3})
    assert e.contains({0: 5})
    coords = e.coordinates({0: 2, 1: 3})
    assert coords == {"a": 2, "b": 1}


def test_matrix_algebra():
    a = Matrix.from_dense([[1, 2], [3, 4]])
    b = Matrix.from_dense([[0, 1], [1, 0]])
    assert (a @ b).to_dense() == [[2, 1], [4, 3]]
    assert (a + b - b) == a
    assert a.T.to_dense() == [[1, 3], [2, 4]]
    assert a.take([1], [0]).to_dense() == [[3]]
