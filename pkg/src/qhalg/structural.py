"""Simple, projective, injective, standard, costandard and tilting modules."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from .algebra import GradedAlgebra, relabel
from .modules import (
    GradedModule,
    ModuleMap,
    Summand,
    direct_sum,
    dual_module,
    hom_basis,
    kernel,
    map_from_projectives,
    projective,
    projective_sum,
    quotient,
    shift,
    simple,
    submodule,
    with_summand,
)
from .scalars import Echelon, Matrix, rank_of

CLASSES = ("P", "I", "Delta", "Nabla", "T", "L")


class NotQuasiHereditary(ValueError):
    pass


def trace_of_higher(p: GradedModule, lam: int) -> Tuple[GradedModule, ModuleMap]:
    """Submodule of ``p`` generated by its parts at vertices above ``lam``."""
    gens = [{i: p.field.one} for i, (v, _) in enumerate(p.labels) if v > lam]
    return submodule(p, gens)


class Catalog:
    """Canonical graded lifts of the structural modules of one algebra."""

    def __init__(self, alg: GradedAlgebra):
        self.alg = alg
        self.n = alg.n
        self._mods: Dict[Tuple[str, int], GradedModule] = {}
        self._keys: Dict[Tuple[str, int], tuple] = {}
        self._hom_cache: Dict[tuple, list] = {}

    @property
    def op(self) -> "Catalog":
        return catalog(self.alg.opposite())

    # -- the six classes ------------------------------------------------
    def get(self, klass: str, lam: int) -> GradedModule:
        key = (klass, lam)
        m = self._mods.get(key)
        if m is None:
            m = getattr(self, "_build_" + klass)(lam)
            self._mods[key] = m
        return m

    def P(self, lam):
        return self.get("P", lam)

    def L(self, lam):
        return self.get("L", lam)

    def I(self, lam):
        return self.get("I", lam)

    def Delta(self, lam):
        return self.get("Delta", lam)

    def Nabla(self, lam):
        return self.get("Nabla", lam)

    def T(self, lam):
        return self.get("T", lam)

    def _build_P(self, lam):
        cache = self.alg._cache.setdefault("projectives", {})
        if lam not in cache:
            cache[lam] = projective(self.alg, lam)
        return cache[lam]

    def _build_L(self, lam):
        return simple(self.alg, lam)

    def _build_I(self, lam):
        d = dual_module(self.op.P(lam), self.alg)
        return with_summand(d, "I", lam)

    def _build_Delta(self, lam):
        p = self.P(lam)
        _, inc = trace_of_higher(p, lam)
        q, _ = quotient(p, inc.matrix.columns())
        q.name = f"Delta({self.alg.vertices[lam]})"
        return with_summand(q, "Delta", lam)

    def _build_Nabla(self, lam):
        d = dual_module(self.op.Delta(lam), self.alg)
        d.name = f"Nabla({self.alg.vertices[lam]})"
        return with_summand(d, "Nabla", lam)

    def _build_T(self, lam):
        m = self.Delta(lam)
        for mu in range(lam - 1, -1, -1):
            m = universal_extension(m, self.P(mu), mu)
        m.name = f"T({self.alg.vertices[lam]})"
        out = with_summand(m, "T", lam)
        if out.summands[0].canon is None:
            raise NotQuasiHereditary(f"T({lam}) lost its canonical slot")
        return out

    # -- isomorphism classes --------------------------------------------
    def iso_key(self, klass: str, lam: int) -> tuple:
        """A label shared by catalog members that are isomorphic."""
        k = self._keys.get((klass, lam))
        if k is None:
            from .modules import is_isomorphic

            x = self.get(klass, lam)
            k = (klass, lam)
            for other in CLASSES:
                if other == klass:
                    break
                y = self.get(other, lam)
                if x.summands[0].canon is None and y.summands[0].canon is None:
                    continue
                if is_isomorphic(y, x):
                    k = self.iso_key(other, lam)
                    break
            self._keys[(klass, lam)] = k
        return k

    def tagged(self, klass: str, lam: int, s: int = 0) -> GradedModule:
        """The catalog member shifted by ``<s>`` with its iso key attached."""
        x = self.get(klass, lam)
        key = self.iso_key(klass, lam)
        base = x.summands[0]
        y = GradedModule(x.algebra, x.labels, x.acts, [Summand(klass, lam, 0, 0, x.dim, base.canon, key)], name=x.name)
        y._basis_acts = x._basis_acts
        return shift(y, s)

    def sum_of(self, klass: str, parts) -> GradedModule:
        """``+ X(lam)<s>`` over ``parts = [(lam, s), ...]``."""
        return direct_sum([self.tagged(klass, lam, s) for lam, s in parts], self.alg)

    def candidates(self, m: GradedModule, prefer: Optional[str] = None):
        order = list(CLASSES)
        if prefer in order:
            order.remove(prefer)
            order.insert(0, prefer)
        lo, hi = m.degree_range()
        seen = set()
        for klass in order:
            for lam in range(self.n):
                try:
                    key = self.iso_key(klass, lam)
                except NotQuasiHereditary:
                    continue
                x = self.tagged(klass, lam)
                a, b = x.degree_range()
                for s in range(b - hi, a - lo + 1):
                    if (key, s) in seen:
                        continue
                    seen.add((key, s))
                    yield klass, lam, s, shift(x, s)

    # -- hom spaces between tilting modules -------------------------------
    def hom(self, kx: str, lx: int, ky: str, ly: int, j: int) -> List[ModuleMap]:
        """Basis of ``hom(X(lx), Y(ly)<j>)`` (cached)."""
        key = (kx, lx, ky, ly, j)
        out = self._hom_cache.get(key)
        if out is None:
            out = hom_basis(self.get(kx, lx), self.get(ky, ly), j)
            self._hom_cache[key] = out
        return out

    def rad_hom(self, kx: str, lx: int, ky: str, ly: int, j: int) -> List[Matrix]:
        """Matrices spanning the radical of ``hom(X(lx), Y(ly)<j>)``."""
        maps = self.hom(kx, lx, ky, ly, j)
        if j != 0 or self.iso_key(kx, lx) != self.iso_key(ky, ly):
            return [f.matrix for f in maps]
        cx = self.get(kx, lx).summands[0].canon
        cy = self.get(ky, ly).summands[0].canon
        out = []
        pivot = None
        for f in maps:
            s = f.matrix[cy, cx]
            if not s:
                out.append(f.matrix)
            elif pivot is None:
                pivot = (f.matrix, s)
            else:
                out.append(f.matrix - pivot[0].scale(s / pivot[1]))
        return out

    def degree_span(self) -> int:
        lo, hi = 0, 0
        for lam in range(self.n):
            for k in ("P", "I", "T"):
                a, b = self.get(k, lam).degree_range()
                lo, hi = min(lo, a), max(hi, b)
        return hi - lo


def catalog(alg: GradedAlgebra) -> Catalog:
    c = alg._cache.get("catalog")
    if c is None:
        c = alg._cache["catalog"] = Catalog(alg)
    return c


def universal_extension(m: GradedModule, p: GradedModule, mu: int) -> GradedModule:
    """Extend ``m`` by copies of ``Delta(mu)`` until ``ext^1(Delta(mu)<d>, -)`` vanishes."""
    k, inc = trace_of_higher(p, mu)
    if k.dim == 0:
        return m
    reps: List[Tuple[int, Matrix]] = []
    lo_k, hi_k = k.degree_range()
    lo_m, hi_m = m.degree_range()
    for d in range(lo_k - hi_m, hi_k - lo_m + 1):
        kd = shift(k, d)
        hk = hom_basis(kd, m, 0)
        if not hk:
            continue
        restricted = Echelon()
        for h in hom_basis(shift(p, d), m, 0):
            restricted.add((h.matrix @ inc.matrix).flat())
        for h in hk:
            if restricted.add(h.matrix.flat()):
                reps.append((d, h.matrix))
    if not reps:
        return m
    # pushout (m + P') / {(sum phi_i(k_i), -k_i)}
    pp = direct_sum([m] + [shift(p, d) for d, _ in reps], m.algebra)
    kk = direct_sum([shift(k, d) for d, _ in reps], m.algebra)
    cols: List[dict] = []
    for t, (d, phi) in enumerate(reps):
        off_p = m.dim + t * p.dim
        for c in range(k.dim):
            vec = dict(phi.column(c))
            for r, v in inc.matrix.column(c).items():
                vec[off_p + r] = -v
            cols.append(vec)
    q, _ = quotient(pp, cols, pivot_key=lambda i: -i)
    return q


def build_catalog(alg: GradedAlgebra) -> Catalog:
    """Every structural module of ``alg`` (raises NotQuasiHereditary on failure)."""
    c = catalog(alg)
    for lam in range(alg.n):
        for k in CLASSES:
            c.get(k, lam)
    return c


def build_catalog_basics(alg: GradedAlgebra) -> Catalog:
    c = catalog(alg)
    for lam in range(alg.n):
        for k in ("P", "L", "I"):
            c.get(k, lam)
    return c


def standard_costandard(c: Catalog) -> Catalog:
    for lam in range(c.n):
        c.get("Delta", lam)
        c.get("Nabla", lam)
    return c


def tilting(c: Catalog, lam: int) -> GradedModule:
    return c.T(lam)


# ---------------------------------------------------------------------------
# filtrations


@dataclass
class FiltrationResult:
    layers: Optional[List[Tuple[int, int]]]  # (lam, shift), top first
    stuck: Optional[GradedModule] = None
    reason: str = ""

    def __bool__(self):
        return self.layers is not None

    def multiset(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for x in self.layers or []:
            out[x] = out.get(x, 0) + 1
        return out


def standard_filtration(m: GradedModule, c: Optional[Catalog] = None) -> FiltrationResult:
    """A filtration of ``m`` by shifted standard modules, or the stuck quotient."""
    c = c or catalog(m.algebra)
    x = m
    layers: List[Tuple[int, int]] = []
    for lam in range(c.n - 1, -1, -1):
        if any(v > lam for v, _ in x.labels):
            return FiltrationResult(None, x, f"composition factor above {lam} survives")
        gens = [i for i, (v, _) in enumerate(x.labels) if v == lam]
        if not gens:
            continue
        delta = c.Delta(lam)
        p = c.P(lam)
        parts = [(lam, -x.labels[i][1]) for i in gens]
        psum = projective_sum(m.algebra, parts)
        pmap = map_from_projectives(psum, x, [{i: m.field.one} for i in gens])
        keep = delta.lift_index
        cols = []
        for t in range(len(gens)):
            for i in keep:
                cols.append(pmap.matrix.column(t * p.dim + i))
        if rank_of(Matrix.from_columns(x.dim, cols).rows) != len(cols):
            return FiltrationResult(None, x, f"standard layer at {lam} does not embed")
        layers.extend((lam, s) for _, s in parts)
        x, _ = quotient(x, cols)
    if x.dim:
        return FiltrationResult(None, x, "quotient does not vanish")
    layers.reverse()
    return FiltrationResult(layers)


@dataclass
class QHCertificate:
    quasi_hereditary: bool
    order: str
    filtrations: Dict[int, Dict[Tuple[int, int], int]] = dc_field(default_factory=dict)
    failing: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.quasi_hereditary


def in_order(alg: GradedAlgebra, order: str) -> GradedAlgebra:
    if order == "natural":
        return alg
    if order == "opposite":
        key = "reversed"
        r = alg._cache.get(key)
        if r is None:
            r = relabel(alg, list(range(alg.n - 1, -1, -1)), name=alg.name)
            alg._cache[key] = r
        return r
    raise ValueError(f"unknown order {order!r}")


def is_quasi_hereditary(alg: GradedAlgebra, order: str = "natural") -> QHCertificate:
    a = in_order(alg, order)
    c = catalog(a)
    cert = QHCertificate(True, order)
    for lam in range(a.n):
        d = c.Delta(lam)
        if sum(1 for v, _ in d.labels if v == lam) != 1:
            return QHCertificate(False, order, cert.filtrations, lam, "standard module has L(lam) with multiplicity > 1")
        if len(hom_basis(d, d, 0)) != 1:
            return QHCertificate(False, order, cert.filtrations, lam, "standard module has non-scalar endomorphisms")
        f = standard_filtration(c.P(lam), c)
        if not f:
            return QHCertificate(False, order, cert.filtrations, lam, f"projective has no standard filtration: {f.reason}")
        cert.filtrations[lam] = f.multiset()
    return cert
