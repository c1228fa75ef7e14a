import pytest

from conftest import BALANCED, QUASI_HEREDITARY, alg
from qhalg.homological import tilting_resolution
from qhalg.modules import ModuleMap, dual_module, hom_dim, is_isomorphic, kernel, shift, socle
from qhalg.structural import catalog, in_order, is_quasi_hereditary, standard_filtration


def test_ex24_minimal_vertex_modules_coincide():
    c = catalog(alg("ex24"))
    l1 = c.L(0)
    for klass in ("Delta", "Nabla", "T"):
        assert is_isomorphic(c.get(klass, 0), l1)
    assert c.iso_key("Delta", 0) == c.iso_key("T", 0) == c.iso_key("L", 0)


def test_ex24_maximal_vertex():
    c = catalog(alg("ex24"))
    assert is_isomorphic(c.Delta(1), c.P(1))
    assert is_isomorphic(c.Nabla(1), c.I(1))


def test_ex24_tilting_two():
    c = catalog(alg("ex24"))
    t = c.T(1)
    assert t.dims() == {(0, -1): 3, (1, 0): 1, (0, 1): 3}
    assert socle(t)[0].dims() == {(0, 1): 3}
    # Delta(2) sits at the bottom, three copies of L(1) in degree -1 on top
    assert standard_filtration(t, c).multiset() == {(1, 0): 1, (0, 1): 3}


def test_ex24_coresolution_kernel_is_standard():
    a = alg("ex24")
    c = catalog(a)
    co = tilting_resolution(c, "coresolve_standard", 1)
    f = ModuleMap(co.comp(0), co.comp(1), co.d(0))
    ker, _ = kernel(f)
    assert ker.dims() == c.Delta(1).dims() == {(1, 0): 1, (0, 1): 3}


def test_ex25_standard_modules():
    c = catalog(alg("ex25"))
    assert c.Delta(0).dims() == {(0, 0): 1}
    assert c.Delta(2).dims() == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    assert c.Nabla(2).dims() == {(2, 0): 1, (1, -1): 1, (0, -2): 1}


def test_filtration_of_shifted_simple():
    c = catalog(alg("ex24"))
    assert standard_filtration(shift(c.L(0), 5), c).multiset() == {(0, 5): 1}


def test_filtration_fails_without_standard_layers():
    c = catalog(alg("ex25"))
    assert not standard_filtration(c.L(1), c)


@pytest.mark.parametrize("name", QUASI_HEREDITARY)
def test_quasi_hereditary_corpus(name):
    cert = is_quasi_hereditary(alg(name))
    assert cert, cert.reason
    a = alg(name)
    c = catalog(a)
    for lam in range(a.n):
        assert hom_dim(c.Delta(lam), c.Delta(lam)) == 1
        assert hom_dim(c.T(lam), c.T(lam)) >= 1


def test_quasi_hereditary_orders():
    assert is_quasi_hereditary(alg("ex24"), "natural")
    assert not is_quasi_hereditary(alg("ex24"), "opposite")
    cert = is_quasi_hereditary(alg("ex25_ringel_target"), "natural")
    assert not cert and cert.failing is not None and cert.reason
    assert is_quasi_hereditary(alg("ex25_ringel_target"), "opposite")
    assert in_order(alg("ex25"), "opposite").vertices == ["3", "2", "1"]


@pytest.mark.parametrize("name", BALANCED)
def test_tilting_homs_vanish_below(name):
    a = alg(name)
    c = catalog(a)
    for lam in range(a.n):
        for mu in range(a.n):
            for i in range(1, 2 * a.n + 1):
                assert hom_dim(shift(c.T(lam), i), c.T(mu)) == 0


def test_ex24_tilting_homs_nonpositive_shift():
    c = catalog(alg("ex24"))
    for i in range(-4, 1):
        assert hom_dim(c.T(0), shift(c.T(1), i)) == 0
    assert hom_dim(c.T(0), shift(c.T(1), 1)) == 3


def test_tilting_modules_have_both_filtrations():
    a = alg("ex25")
    c = catalog(a)
    cop = c.op
    for lam in range(a.n):
        assert standard_filtration(c.T(lam), c)
        # a costandard filtration of T is a standard filtration of its dual over the opposite algebra
        assert standard_filtration(dual_module(c.T(lam)), cop)
