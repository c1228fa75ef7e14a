"""Acceptance criteria 1 to 11.  Each test prints one PASS/FAIL line."""
import random
import time

import pytest

from conftest import BALANCED, KOSZUL, QUASI_HEREDITARY, alg
from qhalg import (
    build_algebra,
    catalog,
    corpus,
    end_algebra_of_complexes,
    ext_dim,
    ext_dim_injective,
    graded_iso_check,
    grading_diagnostics,
    hom_dim,
    homotopy_hom_dim,
    is_balanced,
    is_linear,
    koszul_dual,
    koszulity_checks,
    ringel_dual,
    shift,
    tilting_complex_of_simple,
    tilting_resolution,
    truncate,
    verify_theorem1,
)
from qhalg.algebra import direct_sum, tensor
from qhalg.homological import dominates, one_term


def line(n, ok, detail=""):
    print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'}{(' ' + detail) if detail else ''}")
    return ok


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_01_ex24_tilting_coresolution():
    def run():
        a = build_algebra(corpus("ex24(3)"))
        cat = catalog(a)
        c = tilting_resolution(cat, "coresolve_standard", a.vertices.index("2"))
        return c, is_linear(c, "T", cat)

    (c, lin), dt = timed(run)
    expected = {0: [("T", 1, 0, 1)], 1: [("T", 0, 1, 3)]}
    ok = c.summary() == expected and bool(lin) and dt < 5
    line(1, ok, f"terms {c.summary()} linear={bool(lin)} {dt:.2f}s")
    assert c.summary() == expected
    assert lin
    assert dt < 5


def test_criterion_02_ex24_balanced_algebra_claims():
    rep, dt = timed(lambda: verify_theorem1(corpus("ex24(3)")))
    th = rep.theorem1
    statuses = {k: th[k]["status"] for k in ("hypothesis", "i", "ii", "iii", "iv")}
    iso = th["iv"]["R(E(A)) vs E(R(A))"]["result"]
    ok = set(statuses.values()) == {"pass"} and iso == "isomorphic" and dt < 60
    line(2, ok, f"{statuses} iso={iso} {dt:.2f}s")
    assert set(statuses.values()) == {"pass"}
    assert iso == "isomorphic"
    assert dt < 60


def test_criterion_03_ex25_verdicts():
    def run():
        a = build_algebra(corpus("ex25"))
        k = koszulity_checks(a)
        b = is_balanced(a)
        target = build_algebra(corpus("ex25_ringel_target"))
        iso = graded_iso_check(ringel_dual(a).algebra, target, "ungraded")
        diag = grading_diagnostics(target)
        kt = koszulity_checks(target, standard=False)
        return k, b, iso, diag, kt

    (k, b, iso, diag, kt), dt = timed(run)
    checks = {
        "standard_koszul": bool(k.standard_koszul),
        "not_balanced": not b and b.witness is not None and "position" in b.witness,
        "ringel_matches_target": iso.isomorphic,
        "target_not_quadratic": not diag.quadratic,
        "target_not_koszul": not kt.koszul and kt.koszul.witness is not None,
        "fast": dt < 30,
    }
    line(3, all(checks.values()), f"{checks} witness={b.witness} {dt:.2f}s")
    assert all(checks.values()), checks


def test_criterion_04_balanced_iff_ringel_positive():
    bad = []
    for name in BALANCED:
        a = alg(name)
        if not is_balanced(a) or not ringel_dual(a).algebra.is_positively_graded():
            bad.append(name)
    a = alg("ex25")
    consistent = bool(is_balanced(a)) == ringel_dual(a).algebra.is_positively_graded()
    ok = not bad and consistent and bool(koszulity_checks(a).standard_koszul)
    line(4, ok, f"failures={bad} ex25 consistent={consistent}")
    assert not bad
    assert consistent


def test_criterion_05_standard_costandard_orthogonality():
    bad = []
    for name in QUASI_HEREDITARY:
        a = alg(name)
        cat = catalog(a)
        n = a.n
        for lam in range(n):
            for mu in range(n):
                for i in range(2 * n - 1):
                    for j in range(-2 * n, 2 * n + 1):
                        want = 1 if (lam == mu and i == 0 and j == 0) else 0
                        got = ext_dim(cat.Delta(lam), cat.Nabla(mu), i, j)
                        if got != want:
                            bad.append((name, lam, mu, i, j, got))
    line(5, not bad, f"violations={bad[:5]}")
    assert not bad


def _tilting_pool(name):
    a = alg(name)
    cat = catalog(a)
    pool = [one_term(cat.T(lam)) for lam in range(a.n)]
    pool += [tilting_resolution(cat, "coresolve_standard", lam) for lam in range(a.n)]
    pool += [tilting_resolution(cat, "resolve_costandard", lam) for lam in range(a.n)]
    pool += [tilting_complex_of_simple(cat, lam) for lam in range(a.n)]
    return pool


def test_criterion_06_domination_vanishing():
    bad = []
    for name in BALANCED:
        a = alg(name)
        cat = catalog(a)
        for lam in range(a.n):
            for mu in range(a.n):
                for i in range(1, 2 * a.n + 1):
                    if hom_dim(shift(cat.T(lam), i), cat.T(mu)) != 0:
                        bad.append((name, lam, mu, i))
    pools = [_tilting_pool(n) for n in ("ex24", "ex24(2)", "directed_chain(3)", "directed_chain(2)*directed_chain(2)")]
    rng = random.Random(20240531)
    pairs = []
    while len(pairs) < 20:
        pool = rng.choice(pools)
        x = rng.choice(pool).shifted(rng.randint(-1, 1), rng.randint(-3, 3))
        y = rng.choice(pool).shifted(rng.randint(-1, 1), rng.randint(-3, 3))
        if set(x.comps) & set(y.comps) and dominates(x, y):
            pairs.append((x, y))
    nonzero = [(x.name, y.name, d) for x, y in pairs if (d := homotopy_hom_dim(x, y)) != 0]
    ok = not bad and not nonzero
    line(6, ok, f"module homs={bad[:5]} complex pairs={len(pairs)} nonzero={nonzero[:5]}")
    assert not bad
    assert not nonzero


def test_criterion_07_double_duals():
    bad = []
    for name in KOSZUL:
        a = alg(name)
        ee = koszul_dual(koszul_dual(a).algebra).algebra
        r = graded_iso_check(ee, a)
        if not r.isomorphic:
            bad.append(("E(E)", name, r.status))
    for name in QUASI_HEREDITARY:
        a = alg(name)
        rr = ringel_dual(ringel_dual(a).algebra).algebra
        r = graded_iso_check(rr, a)
        if not r.isomorphic:
            bad.append(("R(R)", name, r.status))
    line(7, not bad, f"failures={bad}")
    assert not bad


def test_criterion_08_end_algebra_of_simple_complexes():
    def run():
        a = build_algebra(corpus("ex24(3)"))
        cat = catalog(a)
        xs = [tilting_complex_of_simple(cat, lam) for lam in range(a.n)]
        for lam, x in enumerate(xs):
            x.name = a.vertices[lam]
        end = end_algebra_of_complexes(xs).algebra.opposite()
        e = koszul_dual(a).algebra
        return end, e, graded_iso_check(end, e)

    (end, e, iso), dt = timed(run)
    same_dims = end.dims_table() == e.dims_table()
    ok = same_dims and iso.isomorphic and dt < 60
    line(8, ok, f"dims equal={same_dims} iso={iso.status} {dt:.2f}s")
    assert same_dims
    assert iso.isomorphic
    assert dt < 60


def test_criterion_09_simples_are_linear_tilting_complexes():
    bad = []
    for name in BALANCED:
        a = alg(name)
        cat = catalog(a)
        for lam in range(a.n):
            lin = is_linear(tilting_complex_of_simple(cat, lam), "T", cat)
            if not lin:
                bad.append((name, lam, lin.witness))
    line(9, not bad, f"failures={bad}")
    assert not bad


def test_criterion_10_closure():
    bad = []
    for name in BALANCED:
        a = alg(name)
        if a.n > 1 and not is_balanced(truncate(a, a.n - 1)):
            bad.append(("truncate", name))
    small = ["ex24(1)", "ex24", "directed_chain(2)", "directed_chain(3)", "semisimple(2)"]
    for x in small:
        for y in small:
            if not is_balanced(direct_sum(alg(x), alg(y))):
                bad.append(("sum", x, y))
    for x, y in [("directed_chain(2)", "directed_chain(2)"), ("ex24(1)", "directed_chain(2)"),
                 ("directed_chain(3)", "semisimple(2)"), ("ex24", "directed_chain(2)")]:
        if not is_balanced(tensor(alg(x), alg(y))):
            bad.append(("tensor", x, y))
    line(10, not bad, f"failures={bad}")
    assert not bad


def test_criterion_11_ext_oracle():
    names = [n for n in ("ex24(1)", "ex24(2)", "ex24", "ex25", "ex25_ringel_target",
                         "directed_chain(2)", "directed_chain(3)", "directed_chain(4)",
                         "semisimple(2)", "semisimple(3)") if alg(n).dim <= 20]
    bad = []
    for name in names:
        a = alg(name)
        cat = catalog(a)
        mods = [cat.get(k, lam) for k in ("L", "P", "Delta", "Nabla") for lam in range(a.n)]
        for x in mods:
            for y in mods:
                for i in range(4):
                    for j in range(-4, 5):
                        p, q = ext_dim(x, y, i, j), ext_dim_injective(x, y, i, j)
                        if p != q:
                            bad.append((name, i, j, p, q))
    line(11, not bad, f"algebras={names} mismatches={bad[:5]}")
    assert not bad
