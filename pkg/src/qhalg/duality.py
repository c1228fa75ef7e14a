"""Ringel and Koszul duals, balancedness and Koszulity checks, isomorphism search."""
from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedAlgebra, extract_presentation, from_structure_constants
from .homological import (
    end_algebra_of_complexes,
    is_linear,
    min_resolution,
    tilting_resolution,
)
from .scalars import Echelon, Matrix, rank_of
from .structural import NotQuasiHereditary, catalog, in_order, is_quasi_hereditary


@dataclass
class DualityResult:
    algebra: GradedAlgebra
    order: str
    provenance: str
    vertex_map: Dict[str, str] = dc_field(default_factory=dict)


# ---------------------------------------------------------------------------
# Ringel dual


def ringel_dual(a: GradedAlgebra, check: bool = True) -> DualityResult:
    """Opposite graded endomorphism algebra of ``T = + T(lam)``, vertices reversed."""
    if check:
        cert = is_quasi_hereditary(a, "natural")
        if not cert:
            raise NotQuasiHereditary(f"{a.name}: {cert.reason} (vertex {cert.failing})")
    cat = catalog(a)
    n = a.n
    one = a.field.one
    ts = [cat.T(lam) for lam in range(n)]
    span = 0
    for t in ts:
        lo, hi = t.degree_range()
        span = max(span, hi - lo)
    spaces: Dict[Tuple[int, int, int], List[Matrix]] = {}
    echs: Dict[Tuple[int, int, int], Echelon] = {}

    def space(lam, mu, j):
        key = (lam, mu, j)
        if key not in spaces:
            if lam == mu and j == 0:
                mats = [Matrix.identity(ts[lam].dim, one)] + cat.rad_hom("T", lam, "T", lam, 0)
            else:
                mats = [f.matrix for f in cat.hom("T", lam, "T", mu, j)]
            spaces[key] = mats
            e = Echelon(track=True)
            for k, m in enumerate(mats):
                e.add(m.flat(), tag=k)
            echs[key] = e
        return spaces[key]

    basis = []
    for lam in range(n):
        for mu in range(n):
            for j in range(-span, span + 1):
                for k in range(len(space(lam, mu, j))):
                    basis.append((lam, mu, j, k))
    index = {b: t for t, b in enumerate(basis)}
    rev = lambda v: n - 1 - v
    # maps T(lam) -> T(mu)<j> become elements from mu to lam in the opposite algebra
    tags = [(rev(mu), rev(lam), j) for lam, mu, j, k in basis]
    idem = [index[(rev(v), rev(v), 0, 0)] for v in range(n)]
    mult: Dict[Tuple[int, int], dict] = {}
    for tx, (l1, m1, j1, k1) in enumerate(basis):
        fx = spaces[(l1, m1, j1)][k1]
        for ty, (l2, m2, j2, k2) in enumerate(basis):
            # x *_op y = y o x, defined when x lands where y starts
            if m1 != l2:
                continue
            prod = spaces[(l2, m2, j2)][k2] @ fx
            if prod.is_zero():
                continue
            key = (l1, m2, j1 + j2)
            space(*key)
            coords = echs[key].coordinates(prod.flat())
            if coords is None:
                raise ArithmeticError("composite of tilting maps outside the hom space")
            vec = {}
            for k, v in coords.items():
                if key + (k,) not in index:
                    raise ValueError("hom range too small for the Ringel dual")
                vec[index[key + (k,)]] = v
            mult[(tx, ty)] = vec
    verts = [a.vertices[v] for v in range(n)]
    alg, _ = from_structure_constants(a.field, verts, tags, mult, idem, name=f"R({a.name})", arrow_prefix="r")
    vmap = {a.vertices[lam]: verts[rev(lam)] for lam in range(n)}
    return DualityResult(alg, "natural", f"ringel_dual({a.name})", vmap)


# ---------------------------------------------------------------------------
# Koszul dual


def koszul_dual(a: GradedAlgebra, cap: Optional[int] = None) -> DualityResult:
    """Opposite Yoneda algebra of the simples, graded by homological degree."""
    cat = catalog(a)
    n = a.n
    if cap is None:
        cap = max(2 * n - 2, 0)
    res = [min_resolution("projective", cat.L(lam), cap) for lam in range(n)]
    for lam, r in enumerate(res):
        r.name = a.vertices[lam]
    length = max(-r.span()[0] for r in res)
    lo = min(r.degree_range()[0] for r in res)
    hi = max(r.degree_range()[1] for r in res)
    data = end_algebra_of_complexes(res, i_range=range(0, length + 1), j_range=range(-(hi - lo), hi - lo + 1),
                                    name=f"Ext({a.name})")
    e = data.algebra.opposite()
    e.name = f"E({a.name})"
    e = _renormalize(e, arrow_prefix="e")
    return DualityResult(e, "natural", f"koszul_dual({a.name})", {v: v for v in a.vertices})


def _renormalize(a: GradedAlgebra, arrow_prefix: str) -> GradedAlgebra:
    tags = [(b.source, b.target, b.degree) for b in a.basis]
    out, _ = from_structure_constants(a.field, a.vertices, tags, a.mult, a.idempotents, name=a.name,
                                      arrow_prefix=arrow_prefix)
    return out


def qh_order(a: GradedAlgebra) -> Optional[str]:
    for order in ("natural", "opposite"):
        if is_quasi_hereditary(a, order):
            return order
    return None


# ---------------------------------------------------------------------------
# Koszulity and balancedness


@dataclass
class Verdict:
    value: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.value


@dataclass
class KoszulityResult:
    koszul: Verdict
    standard_koszul: Verdict


def koszulity_checks(a: GradedAlgebra, cap: Optional[int] = None, standard: bool = True) -> KoszulityResult:
    cat = catalog(a)
    koszul = Verdict(True)
    for lam in range(a.n):
        r = min_resolution("projective", cat.L(lam), cap, strict=False)
        lin = is_linear(r, "P", cat)
        if not lin:
            koszul = Verdict(False, dict(module=f"L({a.vertices[lam]})", resolution="projective", **lin.witness))
            break
    sk = Verdict(True)
    if standard:
        for lam in range(a.n):
            r = min_resolution("projective", cat.Delta(lam), cap, strict=False)
            lin = is_linear(r, "P", cat)
            if not lin:
                sk = Verdict(False, dict(module=f"Delta({a.vertices[lam]})", resolution="projective", **lin.witness))
                break
            r = min_resolution("injective", cat.Nabla(lam), cap, strict=False)
            lin = is_linear(r, "I", cat)
            if not lin:
                sk = Verdict(False, dict(module=f"Nabla({a.vertices[lam]})", resolution="injective", **lin.witness))
                break
    return KoszulityResult(koszul, sk)


def is_balanced(a: GradedAlgebra) -> Verdict:
    cert = is_quasi_hereditary(a, "natural")
    if not cert:
        return Verdict(False, {"reason": "not quasi-hereditary", "vertex": cert.failing, "detail": cert.reason})
    cat = catalog(a)
    for lam in range(a.n):
        s = tilting_resolution(cat, "coresolve_standard", lam)
        lin = is_linear(s, "T", cat)
        if not lin:
            return Verdict(False, dict(module=f"Delta({a.vertices[lam]})", complex="tilting coresolution", **lin.witness))
        c = tilting_resolution(cat, "resolve_costandard", lam)
        lin = is_linear(c, "T", cat)
        if not lin:
            return Verdict(False, dict(module=f"Nabla({a.vertices[lam]})", complex="tilting resolution", **lin.witness))
    return Verdict(True)


# ---------------------------------------------------------------------------
# isomorphism search


@dataclass
class IsoResult:
    status: str  # "isomorphic" | "not_isomorphic" | "inconclusive"
    witness: Optional[dict] = None

    @property
    def isomorphic(self) -> bool:
        return self.status == "isomorphic"


def content_seed(*algs: GradedAlgebra) -> int:
    h = hashlib.sha256()
    for a in algs:
        h.update(repr(sorted(a.dims_table().items())).encode())
        h.update(repr(sorted((k, sorted((i, str(c)) for i, c in v.items())) for k, v in a.mult.items())).encode())
    return int.from_bytes(h.digest()[:8], "big")


def radical_layers(a: GradedAlgebra) -> Dict[Tuple[int, int, int], int]:
    """``dim e_t (J^k / J^(k+1)) e_s`` keyed by ``(s, t, k)``."""
    one = a.field.one
    layers = []
    cur = [{k: one} for k, b in enumerate(a.basis) if b.word]
    while cur:
        layers.append(cur)
        e = Echelon()
        nxt = []
        for ai in range(len(a.arrows)):
            av = a.arrow_vector(ai)
            for x in cur:
                p = a.multiply(av, x)
                if p and e.add(p):
                    nxt.append(p)
        cur = nxt
    out: Dict[Tuple[int, int, int], int] = {}
    for k in range(len(layers)):
        higher = layers[k + 1] if k + 1 < len(layers) else []
        for s in range(a.n):
            for t in range(a.n):
                def part(vecs):
                    return [
                        {i: c for i, c in v.items() if a.basis[i].source == s and a.basis[i].target == t}
                        for v in vecs
                    ]
                d = rank_of(part(layers[k])) - rank_of(part(higher))
                if d:
                    out[(s, t, k + 1)] = d
    return out


def _table(a: GradedAlgebra, graded: bool) -> Dict[Tuple[int, int, int], int]:
    return a.dims_table() if graded else radical_layers(a)


def _arrow_groups(a: GradedAlgebra, graded: bool) -> Dict[tuple, List[int]]:
    g: Dict[tuple, List[int]] = {}
    for i, x in enumerate(a.arrows):
        key = (x.source, x.target, x.degree) if graded else (x.source, x.target)
        g.setdefault(key, []).append(i)
    return g


class _Search:
    def __init__(self, a: GradedAlgebra, b: GradedAlgebra, graded: bool, rng: random.Random):
        self.a, self.b, self.graded, self.rng = a, b, graded, rng
        self.ga = _arrow_groups(a, graded)
        self.gb = _arrow_groups(b, graded)

    def group_map(self, sigma) -> Optional[Dict[tuple, tuple]]:
        out = {}
        for key, arrows in self.ga.items():
            k2 = (sigma[key[0]], sigma[key[1]]) + tuple(key[2:])
            if len(self.gb.get(k2, [])) != len(arrows):
                return None
            out[key] = k2
        if len(out) != len(self.gb) and sum(len(v) for v in self.ga.values()) != sum(len(v) for v in self.gb.values()):
            return None
        return out

    def images_from_matrices(self, gmap, mats) -> Dict[int, dict]:
        imgs = {}
        for key, arrows in self.ga.items():
            barrows = self.gb[gmap[key]]
            m = mats[key]
            for r, ai in enumerate(arrows):
                vec = {}
                for c, bi in enumerate(barrows):
                    if m[r][c]:
                        for k, v in self.b.arrow_vector(bi).items():
                            vec[k] = vec.get(k, 0) + m[r][c] * v
                imgs[ai] = {k: v for k, v in vec.items() if v}
        return imgs

    def verify(self, sigma, imgs: Dict[int, dict]) -> bool:
        a, b = self.a, self.b
        phi = []
        for x in a.basis:
            if not x.word:
                phi.append({b.idempotents[sigma[x.source]]: b.field.one})
                continue
            v = imgs[x.word[-1]]
            for ai in reversed(x.word[:-1]):
                v = b.multiply(imgs[ai], v)
                if not v:
                    break
            phi.append(v)
        if rank_of(phi) != a.dim or a.dim != b.dim:
            return False
        for (i, j), prod in a.mult.items():
            lhs = b.multiply(phi[i], phi[j])
            rhs: dict = {}
            for k, c in prod.items():
                for t, v in phi[k].items():
                    rhs[t] = rhs.get(t, 0) + c * v
            rhs = {t: v for t, v in rhs.items() if v}
            if lhs != rhs:
                return False
        return True

    def identity_mats(self):
        return {key: [[1 if r == c else 0 for c in range(len(v))] for r in range(len(v))] for key, v in self.ga.items()}

    def random_mats(self, scalars_only: bool = False):
        out = {}
        f = self.a.field
        for key, v in self.ga.items():
            n = len(v)
            while True:
                if scalars_only or n == 1:
                    m = [[f(self.rng.randint(1, 9)) if r == c else 0 for c in range(n)] for r in range(n)]
                else:
                    m = [[f(self.rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
                if rank_of([{c: x for c, x in enumerate(row) if x} for row in m]) == n:
                    break
            out[key] = m
        return out

    def solve_scalars(self, sigma, gmap, base) -> Optional[dict]:
        """Rescale the images of ``base`` arrow by arrow by solving the hom equations."""
        import sympy

        a, b = self.a, self.b
        syms = {ai: sympy.Symbol(f"c{ai}") for ai in range(len(a.arrows))}
        base_imgs = self.images_from_matrices(gmap, base)
        # gauge: fix the scalars on a spanning forest of the quiver to 1
        parent = list(range(a.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        fixed = {}
        for ai, x in enumerate(a.arrows):
            r1, r2 = find(x.source), find(x.target)
            if r1 != r2:
                parent[r1] = r2
                fixed[ai] = 1
        eqs = set()
        basis_words = {}
        for k, x in enumerate(a.basis):
            if x.word:
                basis_words[k] = x.word

        def word_image(word):
            v = base_imgs[word[-1]]
            for ai in reversed(word[:-1]):
                v = b.multiply(base_imgs[ai], v)
                if not v:
                    return {}, None
            mono = sympy.Integer(1)
            for ai in word:
                mono *= fixed.get(ai, syms[ai])
            return v, mono

        for (i, j), prod in a.mult.items():
            if i not in basis_words or j not in basis_words:
                continue
            lv, lm = word_image(basis_words[i] + basis_words[j])
            coeffs: Dict[int, object] = {}
            if lm is not None:
                for t, v in lv.items():
                    coeffs[t] = coeffs.get(t, 0) + sympy.Rational(str(v)) * lm
            for k, c in prod.items():
                rv, rm = word_image(basis_words[k])
                if rm is None:
                    continue
                for t, v in rv.items():
                    coeffs[t] = coeffs.get(t, 0) - sympy.Rational(str(c)) * sympy.Rational(str(v)) * rm
            for expr in coeffs.values():
                e = sympy.expand(expr)
                if e != 0:
                    eqs.add(e)
        unknowns = [syms[ai] for ai in range(len(a.arrows)) if ai not in fixed]
        if not eqs:
            sol = {}
        else:
            sols = sympy.solve(list(eqs), unknowns, dict=True)
            sol = None
            for s in sols:
                vals = {}
                ok = True
                for u in unknowns:
                    val = s.get(u, u)
                    val = sympy.sympify(val).subs({w: 1 for w in unknowns})
                    if not val.is_rational or val == 0:
                        ok = False
                        break
                    vals[u] = val
                if ok:
                    sol = vals
                    break
            if sol is None:
                return None
        f = a.field
        imgs = {}
        for ai, v in base_imgs.items():
            if ai in fixed:
                c = f(1)
            else:
                val = sol.get(syms[ai], sympy.Integer(1))
                c = f(int(val.p)) / f(int(val.q))
            imgs[ai] = {k: c * x for k, x in v.items()}
        return imgs


def _perms(n: int):
    ident = tuple(range(n))
    rev = tuple(range(n - 1, -1, -1))
    yield ident
    if rev != ident:
        yield rev
    for p in itertools.permutations(range(n)):
        if p != ident and p != rev:
            yield p


def graded_iso_check(a: GradedAlgebra, b: GradedAlgebra, mode: str = "graded", attempts: int = 40,
                     seed: Optional[int] = None) -> IsoResult:
    graded = mode == "graded"
    if mode not in ("graded", "ungraded"):
        raise ValueError(f"unknown mode {mode!r}")
    if a.field != b.field:
        return IsoResult("not_isomorphic", {"reason": "field mismatch"})
    if a.dim != b.dim:
        return IsoResult("not_isomorphic", {"reason": "dimension", "a": a.dim, "b": b.dim})
    if a.n != b.n:
        return IsoResult("not_isomorphic", {"reason": "vertex count", "a": a.n, "b": b.n})
    ta, tb = _table(a, graded), _table(b, graded)
    sigmas = []
    for sigma in _perms(a.n):
        if all(tb.get((sigma[s], sigma[t], d), 0) == c for (s, t, d), c in ta.items()) and \
                sum(ta.values()) == sum(tb.values()):
            sigmas.append(sigma)
    if not sigmas:
        diff = sorted(set(ta) ^ set(tb) | {k for k in ta if ta.get(k) != tb.get(k)})
        cell = diff[0] if diff else None
        return IsoResult("not_isomorphic", {
            "reason": "no vertex bijection preserves the dimension table",
            "cell": list(cell) if cell else None,
            "a": ta.get(cell, 0) if cell else None,
            "b": tb.get(cell, 0) if cell else None,
        })
    # work from the positively graded side when only one of them is
    swapped = False
    src, dst = a, b
    if not a.is_positively_graded() and b.is_positively_graded():
        src, dst, swapped = b, a, True
        sigmas = [tuple(sorted(range(a.n), key=lambda v: s[v])) for s in sigmas]
    rng = random.Random(content_seed(a, b) if seed is None else seed)
    search = _Search(src, dst, graded, rng)
    any_group = False
    for sigma in sigmas:
        gmap = search.group_map(sigma)
        if gmap is None:
            continue
        any_group = True
        tries = [search.identity_mats()]
        found = None
        for mats in tries:
            imgs = search.images_from_matrices(gmap, mats)
            if search.verify(sigma, imgs):
                found = imgs
                break
            sol = search.solve_scalars(sigma, gmap, mats)
            if sol is not None and search.verify(sigma, sol):
                found = sol
                break
        if found is None:
            for _ in range(attempts):
                mats = search.random_mats()
                imgs = search.images_from_matrices(gmap, mats)
                if search.verify(sigma, imgs):
                    found = imgs
                    break
        if found is None:
            for _ in range(max(1, attempts // 4)):
                mats = search.random_mats()
                sol = search.solve_scalars(sigma, gmap, mats)
                if sol is not None and search.verify(sigma, sol):
                    found = sol
                    break
        if found is not None:
            return IsoResult("isomorphic", _witness(src, dst, sigma, found, swapped))
    if not any_group:
        return IsoResult("not_isomorphic", {"reason": "arrow spaces (rad/rad^2) differ under every admissible vertex bijection"})
    return IsoResult("inconclusive", {"reason": "search exhausted", "bijections_tried": len(sigmas)})


def _witness(src, dst, sigma, imgs, swapped) -> dict:
    from .scalars import format_scalar

    vmap = {src.vertices[v]: dst.vertices[sigma[v]] for v in range(src.n)}
    arrows = {}
    for ai, vec in imgs.items():
        terms = []
        for k, c in sorted(vec.items()):
            word = dst.basis[k].word
            terms.append([format_scalar(c), "*".join(dst.arrows[x].label for x in word)])
        arrows[src.arrows[ai].label] = terms
    order_preserving = all(sigma[v] == v for v in range(src.n))
    return {
        "direction": "b->a" if swapped else "a->b",
        "vertex_map": vmap,
        "arrow_images": arrows,
        "order_preserving": order_preserving,
    }
