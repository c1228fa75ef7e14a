"""Complexes, resolutions, tilting approximations and derived hom dimensions."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedAlgebra, from_structure_constants
from .modules import (
    DUAL_CLASS,
    GradedModule,
    ModuleMap,
    Summand,
    cokernel,
    decompose,
    direct_sum,
    dual_module,
    hom_basis,
    kernel,
    projective_cover,
    quotient,
    restrict,
    shift,
    zero_module,
)
from .scalars import Echelon, Matrix, inverse, kernel_of_rows, rank_of
from .structural import Catalog, catalog


class CapExceeded(RuntimeError):
    def __init__(self, cap: int, syzygy: GradedModule):
        self.cap = cap
        self.syzygy = syzygy
        super().__init__(f"resolution longer than cap {cap}; last syzygy dims {syzygy.dims()}")


class ApproximationFailed(RuntimeError):
    pass


class UnrecognizedSummand(ValueError):
    pass


class ComponentsNotSelfOrthogonal(ValueError):
    pass


class ChainComplex:
    """Bounded complex ``d[i]: X^i -> X^(i+1)``; absent positions are zero."""

    def __init__(self, algebra: GradedAlgebra, comps: Dict[int, GradedModule], diffs: Dict[int, Matrix],
                 name: str = ""):
        self.algebra = algebra
        self.comps = {p: m for p, m in comps.items() if m.dim}
        self.diffs = {}
        for p, d in diffs.items():
            if p in self.comps and p + 1 in self.comps:
                self.diffs[p] = d
        self.name = name
        self.augmentation: Optional[ModuleMap] = None

    @property
    def positions(self) -> List[int]:
        return sorted(self.comps)

    def comp(self, p: int) -> GradedModule:
        m = self.comps.get(p)
        return m if m is not None else zero_module(self.algebra)

    def d(self, p: int) -> Matrix:
        d = self.diffs.get(p)
        if d is None:
            return Matrix(self.comp(p + 1).dim, self.comp(p).dim)
        return d

    def is_zero(self) -> bool:
        return not self.comps

    def span(self) -> Tuple[int, int]:
        ps = self.positions
        return (ps[0], ps[-1]) if ps else (0, -1)

    def degree_range(self) -> Tuple[int, int]:
        lo, hi = None, None
        for m in self.comps.values():
            a, b = m.degree_range()
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
        return (lo or 0, hi if hi is not None else -1)

    def is_complex(self) -> bool:
        for p in self.positions:
            if not (self.d(p + 1) @ self.d(p)).is_zero():
                return False
        return True

    def differentials_are_homomorphisms(self) -> bool:
        for p in self.positions:
            f = ModuleMap(self.comp(p), self.comp(p + 1), self.d(p))
            if not f.is_homomorphism():
                return False
        return True

    def homology(self, p: int) -> GradedModule:
        k, inc = kernel(ModuleMap(self.comp(p), self.comp(p + 1), self.d(p)))
        prev = self.d(p - 1)
        # image of the previous differential inside the kernel
        ech = Echelon(track=True)
        for t, c in enumerate(inc.matrix.columns()):
            ech.add(c, tag=t)
        gens = []
        for c in prev.columns():
            if c:
                gens.append(ech.coordinates(c))
        q, _ = quotient(k, gens)
        return q

    def homology_dims(self) -> Dict[int, Dict]:
        out = {}
        for p in self.positions:
            h = self.homology(p)
            if h.dim:
                out[p] = h.dims()
        return out

    def shifted(self, i: int = 0, j: int = 0) -> "ChainComplex":
        """``X<j>[i]`` with ``X[i]^p = X^(p+i)`` and differentials scaled by ``(-1)^i``."""
        sign = -1 if i % 2 else 1
        comps = {p - i: shift(m, j) for p, m in self.comps.items()}
        diffs = {p - i: d.scale(sign) for p, d in self.diffs.items()}
        return ChainComplex(self.algebra, comps, diffs, name=f"{self.name}<{j}>[{i}]")

    def summary(self) -> Dict[int, List[Tuple]]:
        out = {}
        for p in self.positions:
            m = self.comps[p]
            if m.summands is None:
                out[p] = [("?", None, None, m.dim)]
            else:
                out[p] = summand_multiset(m)
        return out

    def euler_dims(self) -> Dict:
        out: Dict = {}
        for p, m in self.comps.items():
            sign = -1 if p % 2 else 1
            for lab, n in m.dims().items():
                out[lab] = out.get(lab, 0) + sign * n
        return {k: v for k, v in out.items() if v}

    def __repr__(self):
        return f"ChainComplex({self.name!r}, {self.summary()})"


def summand_multiset(m: GradedModule) -> List[Tuple]:
    counts: Dict[Tuple, int] = {}
    for s in m.summands or []:
        k = (s.klass, s.lam, s.shift)
        counts[k] = counts.get(k, 0) + 1
    return sorted(((k[0], k[1], k[2], c) for k, c in counts.items()), key=lambda t: (t[1], t[2], t[0]))


def one_term(m: GradedModule, position: int = 0) -> ChainComplex:
    return ChainComplex(m.algebra, {position: m}, {}, name=m.name)


def dual_complex(c: ChainComplex) -> ChainComplex:
    op = c.algebra.opposite()
    comps = {-p: dual_module(m, op) for p, m in c.comps.items()}
    diffs = {-p - 1: d.T for p, d in c.diffs.items()}
    return ChainComplex(op, comps, diffs, name=f"D{c.name}")


def _relabel_summands(m: GradedModule, klass: str) -> GradedModule:
    if m.summands is None:
        return m
    sums = [replace(s, klass=klass) for s in m.summands]
    out = GradedModule(m.algebra, m.labels, m.acts, sums, name=m.name)
    out._basis_acts = m._basis_acts
    return out


# ---------------------------------------------------------------------------
# minimal resolutions


def default_cap(alg: GradedAlgebra) -> int:
    return max(2 * alg.n - 2, 0)


def min_resolution(side: str, m: GradedModule, cap: Optional[int] = None, strict: bool = True) -> ChainComplex:
    """Minimal projective resolution (positions ``<= 0``) or injective coresolution."""
    alg = m.algebra
    if cap is None:
        cap = default_cap(alg)
    if side == "injective":
        dm = dual_module(m)
        res = min_resolution("projective", dm, cap, strict)
        out = dual_complex(res)
        out = ChainComplex(alg, {p: _relabel_summands(x, "I") for p, x in out.comps.items()}, out.diffs,
                           name=f"injres({m.name})")
        if res.augmentation is not None:
            out.augmentation = ModuleMap(m, out.comp(0), res.augmentation.matrix.T)
        return out
    if side != "projective":
        raise ValueError(f"unknown side {side!r}")
    comps: Dict[int, GradedModule] = {}
    diffs: Dict[int, Matrix] = {}
    if m.dim == 0:
        return ChainComplex(alg, {}, {}, name=f"projres({m.name})")
    cover = projective_cover(m)
    comps[0] = cover.source
    aug = cover
    cur = cover
    pos = 0
    while True:
        k, inc = kernel(cur)
        if k.dim == 0:
            break
        if pos <= -cap:
            if strict:
                raise CapExceeded(cap, k)
            break
        pos -= 1
        c = projective_cover(k)
        comps[pos] = c.source
        diffs[pos] = inc.matrix @ c.matrix
        cur = ModuleMap(c.source, comps[pos + 1], diffs[pos])
    out = ChainComplex(alg, comps, diffs, name=f"projres({m.name})")
    out.augmentation = aug
    return out


def is_linear_resolution(c: ChainComplex) -> Tuple[bool, Optional[Tuple]]:
    for p in c.positions:
        for s in c.comps[p].summands:
            if s.shift != p:
                return False, (p, s.klass, s.lam, s.shift)
    return True, None


# ---------------------------------------------------------------------------
# Ext via resolutions


def _resolution_cached(m: GradedModule, side: str, cap: Optional[int], strict: bool) -> ChainComplex:
    key = ("res", side, cap, strict)
    store = m.__dict__.setdefault("_res_cache", {})
    r = store.get(key)
    if r is None:
        r = store[key] = min_resolution(side, m, cap, strict)
    return r


def ext_dim(m: GradedModule, n: GradedModule, i: int, j: int = 0, cap: Optional[int] = None) -> int:
    """``dim ext^i(m, n<j>)`` from the minimal projective resolution of ``m``."""
    if i < 0:
        return 0
    cap_eff = max(cap if cap is not None else default_cap(m.algebra), i + 1)
    res = _resolution_cached(m, "projective", cap_eff, False)

    def space(k):
        if -k not in res.comps:
            return []
        return hom_basis(res.comps[-k], n, j)

    def rank_delta(k, basis):
        # f -> f o d_{-k-1}
        if not basis or (-k - 1) not in res.comps:
            return 0
        d = res.d(-k - 1)
        return rank_of((f.matrix @ d).flat() for f in basis)

    w_i = space(i)
    if not w_i:
        return 0
    w_prev = space(i - 1) if i >= 1 else []
    return len(w_i) - rank_delta(i, w_i) - rank_delta(i - 1, w_prev)


def ext_dim_injective(m: GradedModule, n: GradedModule, i: int, j: int = 0, cap: Optional[int] = None) -> int:
    """``dim ext^i(m, n<j>)`` from the minimal injective coresolution of ``n``."""
    if i < 0:
        return 0
    cap_eff = max(cap if cap is not None else default_cap(m.algebra), i + 1)
    res = _resolution_cached(n, "injective", cap_eff, False)

    def space(k):
        if k not in res.comps:
            return []
        return hom_basis(m, res.comps[k], j)

    def rank_delta(k, basis):
        if not basis or (k + 1) not in res.comps:
            return 0
        d = res.d(k)
        return rank_of((d @ f.matrix).flat() for f in basis)

    w_i = space(i)
    if not w_i:
        return 0
    w_prev = space(i - 1) if i >= 1 else []
    return len(w_i) - rank_delta(i, w_i) - rank_delta(i - 1, w_prev)


# ---------------------------------------------------------------------------
# tilting approximations


def _shift_range(x: GradedModule, m: GradedModule) -> range:
    """Shifts ``d`` for which ``x<d>`` and ``m`` share a degree."""
    a, b = x.degree_range()
    lo, hi = m.degree_range()
    return range(a - hi, b - lo + 1)


def left_tilting_approximation(m: GradedModule, cat: Catalog) -> Tuple[GradedModule, ModuleMap]:
    """Minimal left ``add(T)``-approximation ``m -> X``."""
    homs: Dict[Tuple[int, int], List[Matrix]] = {}
    for mu in range(cat.n):
        t = cat.T(mu)
        for d in _shift_range(t, m):
            hs = hom_basis(m, t, d)
            if hs:
                homs[(mu, d)] = [h.matrix for h in hs]
    parts = []
    blocks = []
    for (mu, d), hs in sorted(homs.items()):
        rad = Echelon()
        for (nu, e), fs in homs.items():
            for h in cat.rad_hom("T", nu, "T", mu, d - e):
                for f in fs:
                    rad.add((h @ f).flat())
        for f in hs:
            if rad.add(f.flat()):
                parts.append((mu, d))
                blocks.append(f)
    x = cat.sum_of("T", parts)
    rows: List[dict] = []
    for f in blocks:
        rows.extend(f.rows)
    return x, ModuleMap(m, x, Matrix(x.dim, m.dim, [dict(r) for r in rows]))


def right_tilting_approximation(m: GradedModule, cat: Catalog) -> Tuple[GradedModule, ModuleMap]:
    """Minimal right ``add(T)``-approximation ``X -> m``."""
    homs: Dict[Tuple[int, int], List[Matrix]] = {}
    for mu in range(cat.n):
        t = cat.T(mu)
        for d in _shift_range(t, m):
            hs = hom_basis(shift(t, d), m, 0)
            if hs:
                homs[(mu, d)] = [h.matrix for h in hs]
    parts = []
    blocks = []
    for (mu, d), hs in sorted(homs.items()):
        rad = Echelon()
        for (nu, e), fs in homs.items():
            for h in cat.rad_hom("T", mu, "T", nu, e - d):
                for f in fs:
                    rad.add((f @ h).flat())
        for f in hs:
            if rad.add(f.flat()):
                parts.append((mu, d))
                blocks.append(f)
    x = cat.sum_of("T", parts)
    cols: List[dict] = []
    for f in blocks:
        cols.extend(f.columns())
    return x, ModuleMap(x, m, Matrix.from_columns(m.dim, cols))


def _coresolve(m: GradedModule, cat: Catalog, start: int = 0, max_len: Optional[int] = None):
    """Tilting coresolution of a standardly filtered ``m``: positions ``start, start+1, ...``."""
    max_len = max_len if max_len is not None else 2 * cat.n + 2
    comps: Dict[int, GradedModule] = {}
    diffs: Dict[int, Matrix] = {}
    first = None
    prev_proj: Optional[ModuleMap] = None
    cur = m
    pos = start
    while cur.dim:
        if pos - start > max_len:
            raise ApproximationFailed("tilting coresolution does not terminate")
        x, f = left_tilting_approximation(cur, cat)
        if f.rank() != cur.dim:
            raise ApproximationFailed(f"left approximation at position {pos} is not injective")
        comps[pos] = x
        if prev_proj is None:
            first = f
        else:
            diffs[pos - 1] = f.matrix @ prev_proj.matrix
        cur, prev_proj = cokernel(f)
        pos += 1
    return comps, diffs, first


def tilting_resolution(cat: Catalog, side: str, lam: int) -> ChainComplex:
    """Tilting coresolution of ``Delta(lam)`` or tilting resolution of ``Nabla(lam)``."""
    alg = cat.alg
    if side in ("coresolve_standard", "standard"):
        m = cat.tagged("Delta", lam)
        comps, diffs, aug = _coresolve(m, cat)
        c = ChainComplex(alg, comps, diffs, name=f"S({alg.vertices[lam]})")
        c.augmentation = aug
        return c
    if side not in ("resolve_costandard", "costandard"):
        raise ValueError(f"unknown side {side!r}")
    m = cat.tagged("Nabla", lam)
    comps: Dict[int, GradedModule] = {}
    diffs: Dict[int, Matrix] = {}
    prev_inc: Optional[ModuleMap] = None
    cur = m
    pos = 0
    aug = None
    while cur.dim:
        if -pos > 2 * cat.n + 2:
            raise ApproximationFailed("tilting resolution does not terminate")
        x, g = right_tilting_approximation(cur, cat)
        if g.rank() != cur.dim:
            raise ApproximationFailed(f"right approximation at position {pos} is not surjective")
        comps[pos] = x
        if prev_inc is None:
            aug = g
        else:
            diffs[pos] = prev_inc.matrix @ g.matrix
        cur, prev_inc = kernel(g)
        pos -= 1
    c = ChainComplex(alg, comps, diffs, name=f"C({alg.vertices[lam]})")
    c.augmentation = aug
    return c


# ---------------------------------------------------------------------------
# linearity


@dataclass
class LinearityResult:
    linear: bool
    witness: Optional[Dict] = None

    def __bool__(self):
        return self.linear


def is_linear(c: ChainComplex, klass: str, cat: Optional[Catalog] = None) -> LinearityResult:
    """Every summand at position ``i`` is ``S<i>`` for a catalog module ``S`` of class ``klass``."""
    cat = cat or catalog(c.algebra)
    for p in c.positions:
        m = c.comps[p]
        if m.summands is not None and all(s.klass is not None for s in m.summands):
            items = [(s.klass, s.lam, s.shift) for s in m.summands]
        else:
            items = []
            for f in decompose(m, cat, prefer=klass):
                if f.klass is None:
                    raise UnrecognizedSummand(f"summand with dims {f.module.dims()} at position {p}")
                items.extend([(f.klass, f.lam, f.shift)] * f.multiplicity)
        for k, lam, s in items:
            ok_class = k == klass or cat.iso_key(k, lam) == cat.iso_key(klass, lam)
            if not ok_class or s != p:
                return LinearityResult(False, {"position": p, "class": k, "lam": lam,
                                               "vertex": c.algebra.vertices[lam], "shift": s,
                                               "expected_shift": p, "expected_class": klass})
    return LinearityResult(True)


def dominates(x: ChainComplex, y: ChainComplex) -> bool:
    """At every shared position each centroid of ``x`` is strictly below each centroid of ``y``."""
    for p in set(x.comps) & set(y.comps):
        cx = [-s.shift for s in x.comps[p].summands]
        cy = [-s.shift for s in y.comps[p].summands]
        if max(cx) >= min(cy):
            return False
    return True


# ---------------------------------------------------------------------------
# homotopy category


def _self_orthogonal(x: ChainComplex, y: ChainComplex) -> bool:
    def classes(c):
        out = set()
        for m in c.comps.values():
            if m.summands is None:
                return None
            out.update(s.klass for s in m.summands)
        return out

    cx, cy = classes(x), classes(y)
    if cx is None or cy is None:
        return False
    if cx <= {"T"} and cy <= {"T"}:
        return True
    if cx <= {"P"} or cy <= {"I"}:
        return True
    return False


class HomotopyHom:
    """``Hom_K(x, y<j>[i])`` with chosen representatives of a basis."""

    def __init__(self, x: ChainComplex, y: ChainComplex, i: int, j: int, check: bool = True,
                 prefer_identity: bool = False):
        if check and not _self_orthogonal(x, y):
            raise ComponentsNotSelfOrthogonal("components are not in add(T), projective or injective")
        self.x, self.y, self.i, self.j = x, y, i, j
        sign = -1 if i % 2 else 1
        one = x.algebra.field.one
        # unknowns: coefficients of hom bases F[p] : X^p -> Y^(p+i)<j>
        F: Dict[int, List[Matrix]] = {}
        for p in x.positions:
            if p + i in y.comps:
                F[p] = [f.matrix for f in hom_basis(x.comps[p], y.comps[p + i], j)]
        unknowns = [(p, k) for p in sorted(F) for k in range(len(F[p]))]
        eqs: Dict[tuple, dict] = {}
        for p in sorted(F):
            for k, f in enumerate(F[p]):
                # d_y f^p  contributes at (p, row, col) of X^p -> Y^(p+i+1)
                if p + i + 1 in y.comps:
                    for (r, c), v in (y.d(p + i) @ f).entries():
                        eqs.setdefault((p, r, c), {})[(p, k)] = v
                # -sign f^p d_x^(p-1) contributes at (p-1, row, col)
                if p - 1 in x.comps:
                    for (r, c), v in (f @ x.d(p - 1)).entries():
                        e = eqs.setdefault((p - 1, r, c), {})
                        e[(p, k)] = e.get((p, k), 0) - sign * v
        rows = [{k: v for k, v in e.items() if v} for e in eqs.values()]
        z = kernel_of_rows(rows, unknowns, one) if unknowns else []
        self.F = F

        def flatten(parts: Dict[int, Matrix]) -> dict:
            out = {}
            for p, mat in parts.items():
                for (r, c), v in mat.entries():
                    out[(p, r, c)] = v
            return out

        self._flatten = flatten
        # boundaries: h^p : X^p -> Y^(p+i-1)<j>
        bech = Echelon(track=True)
        bcount = 0
        for p in x.positions:
            if p + i - 1 not in y.comps:
                continue
            for h in hom_basis(x.comps[p], y.comps[p + i - 1], j):
                parts: Dict[int, Matrix] = {}
                if p + i in y.comps and p in F:
                    parts[p] = y.d(p + i - 1) @ h.matrix
                if p - 1 in F:
                    parts[p - 1] = (h.matrix @ x.d(p - 1)).scale(sign)
                vec = flatten(parts)
                if vec:
                    bech.add(vec, tag=("B", bcount))
                    bcount += 1
        self.boundary_rank = len(bech)
        self.cycle_dim = len(z)
        reps: List[Dict[int, Matrix]] = []
        candidates = []
        if prefer_identity:
            candidates.append({p: Matrix.identity(m.dim, one) for p, m in x.comps.items()})
        for vec in z:
            parts = {}
            for (p, k), c in vec.items():
                parts[p] = parts[p] + F[p][k].scale(c) if p in parts else F[p][k].scale(c)
            candidates.append(parts)
        for parts in candidates:
            if bech.add(flatten(parts), tag=("R", len(reps))):
                reps.append(parts)
            if len(reps) == self.cycle_dim - self.boundary_rank:
                break
        self.reps = reps
        self._ech = bech

    @property
    def dim(self) -> int:
        return self.cycle_dim - self.boundary_rank

    def coordinates(self, parts: Dict[int, Matrix]) -> List:
        c = self._ech.coordinates(self._flatten(parts))
        if c is None:
            raise ValueError("not a chain map in this space")
        return [c.get(("R", k), 0) for k in range(len(self.reps))]


def homotopy_hom_dim(x: ChainComplex, y: ChainComplex, i: int = 0, j: int = 0,
                     assume_self_orthogonal: bool = False) -> int:
    """``dim Hom_K(x, y<j>[i])``: chain maps modulo null-homotopic ones."""
    return HomotopyHom(x, y, i, j, check=not assume_self_orthogonal).dim


def compose_chain_maps(g: Dict[int, Matrix], f: Dict[int, Matrix], i_f: int) -> Dict[int, Matrix]:
    """``(g o f)^p = g^(p + i_f) f^p``."""
    out = {}
    for p, fm in f.items():
        gm = g.get(p + i_f)
        if gm is not None:
            prod = gm @ fm
            if not prod.is_zero():
                out[p] = prod
    return out


# ---------------------------------------------------------------------------
# Gaussian elimination of complexes


def _reoffset(sums: List[Summand]) -> List[Summand]:
    out = []
    off = 0
    for s in sums:
        out.append(replace(s, offset=off))
        off += s.size
    return out


def _drop_summand(m: GradedModule, s: Summand) -> Tuple[GradedModule, List[int]]:
    keep_s = [t for t in m.summands if t.offset != s.offset]
    idx = [i for t in keep_s for i in t.indices]
    return restrict(m, idx, _reoffset(keep_s)), idx


def _find_cancellation(c: ChainComplex):
    for p in c.positions:
        if p + 1 not in c.comps:
            continue
        d = c.d(p)
        for a in c.comps[p].summands:
            if a.canon is None:
                continue
            for b in c.comps[p + 1].summands:
                if b.canon is None or b.key != a.key or b.shift != a.shift:
                    continue
                if d[b.offset + b.canon, a.offset + a.canon]:
                    return p, a, b
    return None


def reduce(c: ChainComplex) -> ChainComplex:
    """Cancel isomorphism blocks of the differentials until none remain."""
    for m in c.comps.values():
        if m.summands is None:
            raise UnrecognizedSummand("reduce needs components with known summands")
    comps = dict(c.comps)
    diffs = dict(c.diffs)
    cur = ChainComplex(c.algebra, comps, diffs, name=c.name)
    cur.augmentation = c.augmentation
    one = c.algebra.field.one
    while True:
        hit = _find_cancellation(cur)
        if hit is None:
            return cur
        p, a, b = hit
        X, Y = cur.comps[p], cur.comps[p + 1]
        d = cur.d(p)
        A = list(a.indices)
        B = list(b.indices)
        Xr = [i for i in range(X.dim) if i not in set(A)]
        Yr = [i for i in range(Y.dim) if i not in set(B)]
        phi = d.take(B, A)
        delta = d.take(B, Xr)
        gamma = d.take(Yr, A)
        eps = d.take(Yr, Xr)
        new_d = eps - gamma @ inverse(phi, one) @ delta
        X2, xi = _drop_summand(X, a)
        Y2, yi = _drop_summand(Y, b)
        assert xi == Xr and yi == Yr
        comps = dict(cur.comps)
        diffs = dict(cur.diffs)
        comps[p] = X2
        comps[p + 1] = Y2
        diffs[p] = new_d
        if p - 1 in diffs:
            diffs[p - 1] = diffs[p - 1].take(Xr, list(range(diffs[p - 1].ncols)))
        if p + 1 in diffs:
            diffs[p + 1] = diffs[p + 1].take(list(range(diffs[p + 1].nrows)), Yr)
        nxt = ChainComplex(c.algebra, comps, diffs, name=c.name)
        nxt.augmentation = cur.augmentation
        cur = nxt


# ---------------------------------------------------------------------------
# tilting complexes of simple modules


def tilting_complex_of_simple(cat: Catalog, lam: int, verify: bool = True) -> ChainComplex:
    """A reduced complex of tilting modules isomorphic in the derived category to ``L(lam)``.

    The minimal projective resolution is processed from the left: each term
    is replaced by its left tilting approximation and the cokernel is pushed
    into the next term; the last term is replaced by its tilting coresolution.
    """
    alg = cat.alg
    res = min_resolution("projective", cat.L(lam))
    comps = dict(res.comps)
    diffs = dict(res.diffs)
    ps = res.positions
    for p in ps[:-1]:
        q = comps[p]
        x, f = left_tilting_approximation(q, cat)
        if f.rank() != q.dim:
            raise ApproximationFailed(f"left approximation at position {p} is not injective")
        nxt = comps[p + 1]
        d = diffs[p]
        pair = direct_sum([nxt, x], alg)
        rel = []
        for col in range(q.dim):
            vec = dict(d.column(col))
            for r, v in f.matrix.column(col).items():
                vec[nxt.dim + r] = -v
            if vec:
                rel.append(vec)
        e, proj = quotient(pair, rel, pivot_key=lambda i: i)
        if p - 1 in diffs:
            diffs[p - 1] = f.matrix @ diffs[p - 1]
        diffs[p] = proj.matrix.take(list(range(e.dim)), [nxt.dim + r for r in range(x.dim)])
        if p + 2 in comps and p + 1 in diffs:
            old = diffs[p + 1]
            diffs[p + 1] = Matrix.from_columns(comps[p + 2].dim, [old.column(i) if i < nxt.dim else {} for i in e.lift_index])
        comps[p] = x
        comps[p + 1] = e
    last = ps[-1]
    q = comps[last]
    tail, tail_d, first = _coresolve(q, cat, start=last)
    if last - 1 in diffs:
        diffs[last - 1] = first.matrix @ diffs[last - 1]
    comps.update(tail)
    diffs.update(tail_d)
    c = ChainComplex(alg, comps, diffs, name=f"Lc({alg.vertices[lam]})")
    out = reduce(c)
    out.name = c.name
    if verify:
        h = {p: dims for p, dims in out.homology_dims().items()}
        if h != {0: {(lam, 0): 1}}:
            raise ApproximationFailed(f"tilting complex of L({lam}) has homology {h}")
    return out


# ---------------------------------------------------------------------------
# endomorphism algebras of complexes


@dataclass
class EndAlgebraData:
    algebra: GradedAlgebra
    basis: List[Tuple[int, int, int, int]] = dc_field(default_factory=list)  # (src, tgt, i, j)


def end_algebra_of_complexes(xs: Sequence[ChainComplex], i_range: Optional[Sequence[int]] = None,
                             j_range: Optional[Sequence[int]] = None, check: bool = True,
                             name: str = "End") -> EndAlgebraData:
    """Graded algebra of homotopy classes ``x_a -> x_b<j>[i]``, graded by ``i``.

    The product ``g*f`` is the composite ``g o f`` (``f`` first); callers take
    the opposite where needed.
    """
    alg = xs[0].algebra
    if i_range is None or j_range is None:
        lo_p = min(x.span()[0] for x in xs if not x.is_zero())
        hi_p = max(x.span()[1] for x in xs if not x.is_zero())
        lo_d = min(x.degree_range()[0] for x in xs if not x.is_zero())
        hi_d = max(x.degree_range()[1] for x in xs if not x.is_zero())
        if i_range is None:
            i_range = range(-(hi_p - lo_p), hi_p - lo_p + 1)
        if j_range is None:
            j_range = range(-(hi_d - lo_d), hi_d - lo_d + 1)
    spaces: Dict[Tuple[int, int, int, int], HomotopyHom] = {}

    def space(a, b, i, j):
        key = (a, b, i, j)
        s = spaces.get(key)
        if s is None:
            s = spaces[key] = HomotopyHom(xs[a], xs[b], i, j, check=check, prefer_identity=(a == b and i == 0 and j == 0))
        return s

    basis = []
    for a in range(len(xs)):
        for b in range(len(xs)):
            for i in i_range:
                for j in j_range:
                    s = space(a, b, i, j)
                    for k in range(s.dim):
                        basis.append((a, b, i, j, k))
    index = {b: t for t, b in enumerate(basis)}
    idem = [index[(a, a, 0, 0, 0)] for a in range(len(xs))]
    tags = [(a, b, i) for (a, b, i, j, k) in basis]
    mult: Dict[Tuple[int, int], dict] = {}
    for t1, (b, c, i2, j2, k2) in enumerate(basis):
        g = spaces[(b, c, i2, j2)].reps[k2]
        for t2, (a, b2, i1, j1, k1) in enumerate(basis):
            if b2 != b:
                continue
            f = spaces[(a, b, i1, j1)].reps[k1]
            comp = compose_chain_maps(shift_parts(g, 0), f, i1)
            if not comp:
                continue
            target = space(a, c, i1 + i2, j1 + j2)
            coords = target.coordinates(comp)
            vec = {}
            for k, v in enumerate(coords):
                if v:
                    key = (a, c, i1 + i2, j1 + j2, k)
                    if key not in index:
                        raise ValueError("degree range too small for the endomorphism algebra")
                    vec[index[key]] = v
            if vec:
                mult[(t1, t2)] = vec
    verts = [x.name or str(t) for t, x in enumerate(xs)]
    out, _ = from_structure_constants(alg.field, verts, tags, mult, idem, name=name)
    return EndAlgebraData(out, [(a, b, i, j) for (a, b, i, j, k) in basis])


def shift_parts(parts: Dict[int, Matrix], k: int) -> Dict[int, Matrix]:
    return {p + k: m for p, m in parts.items()} if k else parts
