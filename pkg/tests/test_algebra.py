import pytest
from hypothesis import HealthCheck, assume, given, settings

from conftest import alg
from qhalg.algebra import (
    NotFiniteDimensional,
    build_algebra,
    check_associativity,
    combine,
    direct_sum,
    extract_presentation,
    grading_diagnostics,
    tensor,
    truncate,
)
from qhalg.duality import graded_iso_check
from qhalg.presentation import corpus, parse
from qhalg.scalars import Field
from strategies import presentations


def test_ex24_dimensions():
    a = alg("ex24")
    assert a.dim == 17
    assert a.graded_dims() == {0: 2, 1: 6, 2: 9}
    # (source, target, degree) -> dimension, internal vertex indices
    assert a.dims_table() == {(0, 0, 0): 1, (1, 1, 0): 1, (0, 1, 1): 3, (1, 0, 1): 3, (0, 0, 2): 9}


@pytest.mark.parametrize("name, dim", [("ex24(1)", 5), ("ex24(2)", 10), ("ex25", 14),
                                       ("ex25_ringel_target", 21), ("directed_chain(4)", 10),
                                       ("semisimple(3)", 3)])
def test_corpus_dimensions(name, dim):
    assert alg(name).dim == dim


def test_ex25_grading():
    a = alg("ex25")
    assert a.graded_dims() == {0: 3, 1: 4, 2: 4, 3: 2, 4: 1}
    assert a.is_positively_graded() and a.top_degree() == 4


@pytest.mark.parametrize("name", ["ex24(1)", "ex25", "directed_chain(3)"])
def test_associative(name):
    assert check_associativity(alg(name))


def test_right_factor_acts_first():
    a = alg("ex25")
    idx = {x.label: i for i, x in enumerate(a.arrows)}
    # a : 1 -> 2, b : 2 -> 1 and a*b = 0, but b*a is the nonzero loop at 1
    ab = a.multiply(a.arrow_vector(idx["a"]), a.arrow_vector(idx["b"]))
    ba = a.multiply(a.arrow_vector(idx["b"]), a.arrow_vector(idx["a"]))
    assert ab == {}
    (k,) = ba
    assert (a.basis[k].source, a.basis[k].target, a.basis[k].degree) == (0, 0, 2)


def test_opposite_is_involutive():
    a = alg("ex25")
    op = a.opposite()
    assert op.dims_table() == {(t, s, d): n for (s, t, d), n in a.dims_table().items()}
    assert graded_iso_check(op.opposite(), a).isomorphic


def test_not_finite_dimensional():
    p = parse("algebra loop\nvertices 1\narrow x : 1 -> 1\n")
    with pytest.raises(NotFiniteDimensional):
        build_algebra(p)


def test_prime_field_build():
    p = corpus("ex24", Field(5))
    a = build_algebra(p)
    assert a.field == Field(5) and a.dim == 17


def test_truncate_ex24_is_one_vertex():
    t = truncate(alg("ex24"), 1)
    assert t.vertices == ["1"] and t.dim == 1
    with pytest.raises(ValueError):
        truncate(alg("ex24"), 0)


def test_direct_sum_and_tensor_dimensions():
    a, b = alg("ex24(1)"), alg("directed_chain(2)")
    s = direct_sum(a, b)
    assert s.dim == a.dim + b.dim and s.n == a.n + b.n
    t = tensor(a, b)
    assert t.dim == a.dim * b.dim
    assert t.vertices == ["1_1", "1_2", "2_1", "2_2"]
    assert check_associativity(t)
    with pytest.raises(ValueError):
        direct_sum(a, build_algebra(corpus("ex24(1)", Field(3))))
    with pytest.raises(ValueError):
        combine("rotate", a)


def test_tensor_graded_dims_multiply():
    a, b = alg("directed_chain(2)"), alg("ex24(1)")
    ga, gb = a.graded_dims(), b.graded_dims()
    want = {}
    for i, x in ga.items():
        for j, y in gb.items():
            want[i + j] = want.get(i + j, 0) + x * y
    assert tensor(a, b).graded_dims() == want


@pytest.mark.parametrize("name", ["ex24", "ex25", "ex25_ringel_target", "directed_chain(3)"])
def test_extract_presentation_rebuilds(name):
    a = alg(name)
    b = build_algebra(extract_presentation(a))
    assert b.dims_table() == a.dims_table()
    assert graded_iso_check(a, b).isomorphic


def test_grading_diagnostics():
    assert grading_diagnostics(alg("ex24")).quadratic
    d = grading_diagnostics(alg("ex25_ringel_target"))
    assert d.positively_graded and not d.quadratic


@given(p=presentations(acyclic=True))
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_random_acyclic_algebras(p):
    a = build_algebra(p)
    assert check_associativity(a)
    assert sum(a.graded_dims().values()) == a.dim
    b = build_algebra(extract_presentation(a))
    assert b.dims_table() == a.dims_table()


@given(p=presentations())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_random_algebras_when_finite(p):
    try:
        a = build_algebra(p, degree_cap=6)
    except NotFiniteDimensional:
        assume(False)
    assert check_associativity(a)
    assert a.opposite().opposite().dims_table() == a.dims_table()
