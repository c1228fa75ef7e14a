import pytest
from hypothesis import HealthCheck, given, settings

from conftest import BALANCED, alg
from qhalg.algebra import build_algebra
from qhalg.homological import (
    CapExceeded,
    ChainComplex,
    HomotopyHom,
    end_algebra_of_complexes,
    ext_dim,
    ext_dim_injective,
    homotopy_hom_dim,
    is_linear,
    min_resolution,
    one_term,
    reduce,
    tilting_complex_of_simple,
    tilting_resolution,
)
from qhalg.modules import simple
from qhalg.presentation import parse
from qhalg.scalars import Matrix
from qhalg.structural import catalog
from strategies import presentations


def test_ex24_simple_resolutions():
    c = catalog(alg("ex24"))
    r1 = min_resolution("projective", c.L(0))
    assert r1.summary() == {0: [("P", 0, 0, 1)], -1: [("P", 1, -1, 3)]}
    r2 = min_resolution("projective", c.L(1))
    assert r2.summary() == {0: [("P", 1, 0, 1)], -1: [("P", 0, -1, 3)], -2: [("P", 1, -2, 9)]}
    for r, lam in ((r1, 0), (r2, 1)):
        assert r.is_complex() and r.differentials_are_homomorphisms()
        assert r.homology_dims() == {0: c.L(lam).dims()}
        assert is_linear(r, "P", c)


def test_injective_coresolution_mirrors():
    c = catalog(alg("ex24"))
    r = min_resolution("injective", c.L(1))
    assert r.summary() == {0: [("I", 1, 0, 1)], 1: [("I", 0, 1, 3)], 2: [("I", 1, 2, 9)]}
    assert is_linear(r, "I", c)


def test_cap_exceeded_on_infinite_projective_dimension():
    a = build_algebra(parse("algebra dual_numbers\nvertices 1\narrow x : 1 -> 1\nrelations\nx*x\n"))
    c = catalog(a)
    with pytest.raises(CapExceeded):
        min_resolution("projective", c.L(0), cap=3)
    partial = min_resolution("projective", c.L(0), cap=3, strict=False)
    assert partial.positions == [-3, -2, -1, 0]


def test_ext_between_simples():
    c = catalog(alg("ex24"))
    assert ext_dim(c.L(0), c.L(1), 1, -1) == 3
    assert ext_dim(c.L(0), c.L(1), 1, 1) == 0
    assert ext_dim(c.L(0), c.L(0), 0, 0) == 1
    assert ext_dim_injective(c.L(0), c.L(1), 1, -1) == 3


def test_ex24_tilting_resolution_of_costandard():
    c = catalog(alg("ex24"))
    r = tilting_resolution(c, "resolve_costandard", 1)
    assert r.summary() == {0: [("T", 1, 0, 1)], -1: [("T", 0, -1, 3)]}
    assert r.homology_dims() == {0: c.Nabla(1).dims()}


def test_ex25_coresolution_is_not_linear():
    c = catalog(alg("ex25"))
    lin = is_linear(tilting_resolution(c, "coresolve_standard", 2), "T", c)
    assert not lin
    assert lin.witness["position"] == 1 and lin.witness["shift"] != lin.witness["expected_shift"]


@pytest.mark.parametrize("name", BALANCED)
def test_simples_as_linear_tilting_complexes(name):
    a = alg(name)
    c = catalog(a)
    for lam in range(a.n):
        x = tilting_complex_of_simple(c, lam)
        assert x.is_complex()
        assert x.homology_dims() == {0: c.L(lam).dims()}
        assert is_linear(x, "T", c)


def test_ex24_simple_two_complex():
    c = catalog(alg("ex24"))
    x = tilting_complex_of_simple(c, 1)
    assert x.summary() == {-1: [("T", 0, -1, 3)], 0: [("T", 1, 0, 1)], 1: [("T", 0, 1, 3)]}


def test_reduce_cone_of_identity():
    c = catalog(alg("ex24"))
    t = c.T(1)
    cone = ChainComplex(t.algebra, {-1: t, 0: t}, {-1: Matrix.identity(t.dim, t.algebra.field.one)})
    assert cone.is_complex()
    assert reduce(cone).is_zero()


def test_homotopy_homs():
    c = catalog(alg("ex24"))
    x = one_term(c.T(1))
    assert homotopy_hom_dim(x, x) == 1
    assert HomotopyHom(x, x, 0, 0).dim == 1
    s = tilting_complex_of_simple(c, 1)
    # the identity of a complex with homology L(2) survives, its shifts do not
    assert homotopy_hom_dim(s, s) == 1
    assert homotopy_hom_dim(s, s.shifted(0, 1)) == 0
    assert homotopy_hom_dim(s.shifted(0, 1), s) == 0


def test_end_algebra_of_one_term_complex():
    c = catalog(alg("ex24"))
    x = one_term(c.T(1))
    x.name = "T"
    e = end_algebra_of_complexes([x], i_range=range(0, 1), j_range=range(0, 1)).algebra
    assert e.dim == 1 and e.graded_dims() == {0: 1}


@given(p=presentations(acyclic=True))
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_ext_oracle_on_random_algebras(p):
    a = build_algebra(p)
    ls = [simple(a, v) for v in range(a.n)]
    for x in ls:
        for y in ls:
            for i in range(3):
                for j in range(-3, 1):
                    assert ext_dim(x, y, i, j) == ext_dim_injective(x, y, i, j)
