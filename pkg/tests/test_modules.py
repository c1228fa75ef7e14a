import pytest
from hypothesis import given, settings, strategies as st

from conftest import alg
from qhalg.modules import (
    cokernel,
    decompose,
    direct_sum,
    dual_module,
    end_basis,
    hom_basis,
    hom_dim,
    identity_map,
    image,
    injective_envelope,
    is_isomorphic,
    kernel,
    projective,
    projective_cover,
    radical,
    shift,
    simple,
    socle,
    top,
)
from qhalg.structural import catalog

NAMES = ["ex24", "ex25", "directed_chain(3)", "ex24(1)+directed_chain(2)"]


def test_projective_of_ex24():
    a = alg("ex24")
    p = projective(a, 0)
    assert p.dims() == {(0, 0): 1, (1, 1): 3, (0, 2): 9}
    assert p.check()
    assert radical(p)[0].dims() == {(1, 1): 3, (0, 2): 9}
    assert top(p)[0].dims() == {(0, 0): 1}
    assert socle(p)[0].dims() == {(0, 2): 9}


def test_shift_moves_degrees_down():
    p = projective(alg("ex24"), 0)
    assert shift(p, 1).dims() == {(0, -1): 1, (1, 0): 3, (0, 1): 9}
    assert shift(p, -2).degree_range() == (2, 4)


def test_dual_reverses_degrees():
    p = projective(alg("ex24"), 0)
    d = dual_module(p)
    assert d.dims() == {(v, -k): n for (v, k), n in p.dims().items()}
    assert d.check()
    assert dual_module(d).dims() == p.dims()


def _catalog_modules(name):
    a = alg(name)
    c = catalog(a)
    return a, [c.get(k, lam) for k in ("P", "I", "L", "Delta", "Nabla", "T") for lam in range(a.n)]


@pytest.mark.parametrize("name", NAMES)
def test_hom_from_projective_counts_vertex_space(name):
    a, mods = _catalog_modules(name)
    for m in mods:
        lo, hi = m.degree_range()
        dims = m.dims()
        for v in range(a.n):
            for j in range(lo - 1, hi + 2):
                assert hom_dim(projective(a, v), m, j) == dims.get((v, j), 0)


@given(k=st.integers(0, 3), data=st.data())
@settings(max_examples=40, deadline=None)
def test_hom_basis_elements_are_homomorphisms(k, data):
    name = NAMES[k]
    a, mods = _catalog_modules(name)
    x = data.draw(st.sampled_from(mods))
    y = data.draw(st.sampled_from(mods))
    j = data.draw(st.integers(-2, 2))
    basis = hom_basis(x, y, j)
    assert len(basis) == hom_dim(x, y, j)
    for f in basis:
        assert f.is_homomorphism()
    # hom(X, Y<j>) == hom(X<-j>, Y)
    assert len(basis) == hom_dim(shift(x, -j), y, 0)


@given(k=st.integers(0, 3), data=st.data())
@settings(max_examples=30, deadline=None)
def test_cover_and_envelope_exactness(k, data):
    _, mods = _catalog_modules(NAMES[k])
    m = data.draw(st.sampled_from(mods))
    f = projective_cover(m)
    assert f.is_homomorphism() and f.rank() == m.dim
    ker, inc = kernel(f)
    assert ker.dim + m.dim == f.source.dim
    assert (f @ inc).is_zero()
    g = injective_envelope(m)
    assert g.rank() == m.dim
    coker, proj = cokernel(g)
    assert coker.dim + m.dim == g.target.dim
    img, _ = image(g)
    assert img.dim == m.dim


def test_tops_of_projectives_are_simple():
    a = alg("ex25")
    for v in range(a.n):
        t, _ = top(projective(a, v))
        assert is_isomorphic(t, simple(a, v))


def test_decompose_recovers_summands():
    a = alg("ex24")
    c = catalog(a)
    m = direct_sum([projective(a, 0), shift(c.L(1), 2), projective(a, 0), shift(c.T(1), -1)])
    got = sorted((f.klass, f.lam, f.shift, f.multiplicity) for f in decompose(m, c))
    assert got == [("L", 1, 2, 1), ("P", 0, 0, 2), ("T", 1, -1, 1)]


def test_degree_zero_endomorphisms():
    a = alg("ex24")
    c = catalog(a)
    for lam in range(a.n):
        for m in (c.T(lam), c.Delta(lam), c.P(lam)):
            ends = end_basis(m)
            assert len(ends) == hom_dim(m, m, 0) == 1
            assert all(f.is_homomorphism() for f in ends)
    assert identity_map(c.T(1)).is_homomorphism()


def test_isomorphism_is_shift_sensitive():
    a = alg("ex24")
    p = projective(a, 1)
    assert is_isomorphic(p, shift(p, 0))
    assert not is_isomorphic(p, shift(p, 1))
    assert not is_isomorphic(p, projective(a, 0))
