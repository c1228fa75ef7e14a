"""Finite-dimensional graded modules over a :class:`GradedAlgebra`.

A module has one basis vector per label ``(vertex, degree)`` and one action
matrix per arrow.  Maps are stored as a single matrix ``target.dim x
source.dim``; every map here is homogeneous of degree zero.

Modules built by direct sums remember their summands as :class:`Summand`
records.  A summand of a catalog class ``(klass, lam)`` shifted by ``<s>``
has a one-dimensional *canonical slot* at ``(lam, -s)``; the entry of an
endomorphism at that slot is its scalar part.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedAlgebra
from .scalars import Echelon, Matrix, charpoly_roots, kernel_of_rows, rank_of

Label = Tuple[int, int]

DUAL_CLASS = {"P": "I", "I": "P", "Delta": "Nabla", "Nabla": "Delta", "T": "T", "L": "L"}


class IdempotentLiftDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class Summand:
    klass: Optional[str]
    lam: Optional[int]
    shift: int
    offset: int
    size: int
    canon: Optional[int] = None  # local index of the canonical slot
    key: Optional[tuple] = None  # isomorphism class of the unshifted module

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + self.size)


class GradedModule:
    def __init__(self, algebra: GradedAlgebra, labels: Sequence[Label], acts: Sequence[Matrix],
                 summands: Optional[List[Summand]] = None, name: str = ""):
        self.algebra = algebra
        self.labels = list(labels)
        self.acts = list(acts)
        self.summands = summands
        self.name = name
        self._slots = None
        self._basis_acts: Dict[int, Matrix] = {}

    # -- shape ----------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def field(self):
        return self.algebra.field

    def slots(self) -> Dict[Label, List[int]]:
        if self._slots is None:
            s: Dict[Label, List[int]] = defaultdict(list)
            for i, lab in enumerate(self.labels):
                s[lab].append(i)
            self._slots = dict(s)
        return self._slots

    def dims(self) -> Dict[Label, int]:
        return {k: len(v) for k, v in sorted(self.slots().items())}

    def degree_range(self) -> Tuple[int, int]:
        if not self.labels:
            return (0, -1)
        ds = [d for _, d in self.labels]
        return (min(ds), max(ds))

    def __repr__(self):
        return f"GradedModule({self.name!r}, dims={self.dims()})"

    def is_zero(self) -> bool:
        return not self.labels

    # -- action ---------------------------------------------------------
    def act_basis(self, k: int) -> Matrix:
        """Matrix of the algebra basis element ``k``."""
        m = self._basis_acts.get(k)
        if m is None:
            b = self.algebra.basis[k]
            if not b.word:
                m = Matrix(self.dim, self.dim)
                for i, (v, _) in enumerate(self.labels):
                    if v == b.source:
                        m.rows[i][i] = self.field.one
            else:
                m = self.acts[b.word[-1]]
                for a in reversed(b.word[:-1]):
                    m = self.acts[a] @ m
            self._basis_acts[k] = m
        return m

    def act_element(self, x: dict) -> Matrix:
        out = Matrix(self.dim, self.dim)
        for k, c in x.items():
            out = out + self.act_basis(k).scale(c)
        return out

    def shift(self, i: int) -> "GradedModule":
        return shift(self, i)

    def check(self) -> bool:
        """Arrow matrices respect labels and the algebra's structure constants."""
        alg = self.algebra
        for ai, a in enumerate(alg.arrows):
            for (r, c), _ in self.acts[ai].entries():
                sv, sd = self.labels[c]
                tv, td = self.labels[r]
                if sv != a.source or tv != a.target or td != sd + a.degree:
                    return False
        for (i, j), prod in alg.mult.items():
            lhs = self.act_basis(i) @ self.act_basis(j)
            if lhs != self.act_element(prod):
                return False
        return True


class ModuleMap:
    def __init__(self, source: GradedModule, target: GradedModule, matrix: Matrix):
        if matrix.shape != (target.dim, source.dim):
            raise ValueError("map shape mismatch")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_homomorphism(self) -> bool:
        f = self.matrix
        for r, c in f.flat():
            if self.target.labels[r] != self.source.labels[c]:
                return False
        for g in range(len(self.source.acts)):
            if self.target.acts[g] @ f != f @ self.source.acts[g]:
                return False
        return True

    def rank(self) -> int:
        return rank_of(self.matrix.rows)


def identity_map(m: GradedModule) -> ModuleMap:
    return ModuleMap(m, m, Matrix.identity(m.dim, m.field.one))


def zero_map(m: GradedModule, n: GradedModule) -> ModuleMap:
    return ModuleMap(m, n, Matrix(n.dim, m.dim))


# ---------------------------------------------------------------------------
# constructors


def zero_module(alg: GradedAlgebra) -> GradedModule:
    return GradedModule(alg, [], [Matrix(0, 0) for _ in alg.arrows], summands=[])


def shift(m: GradedModule, i: int) -> GradedModule:
    """``M<i>`` with ``(M<i>)_j = M_{i+j}``: degree ``d`` moves to ``d - i``."""
    if i == 0:
        return m
    sums = None
    if m.summands is not None:
        sums = [replace(s, shift=s.shift + i) for s in m.summands]
    out = GradedModule(m.algebra, [(v, d - i) for v, d in m.labels], m.acts, sums, name=f"{m.name}<{i}>")
    out._basis_acts = m._basis_acts
    return out


def direct_sum(mods: Sequence[GradedModule], alg: Optional[GradedAlgebra] = None) -> GradedModule:
    if not mods:
        return zero_module(alg)
    alg = mods[0].algebra
    labels: List[Label] = []
    sums: Optional[List[Summand]] = []
    off = 0
    for m in mods:
        labels.extend(m.labels)
        if sums is not None and m.summands is not None:
            sums.extend(replace(s, offset=s.offset + off) for s in m.summands)
        else:
            sums = None
        off += m.dim
    acts = []
    for g in range(len(alg.arrows)):
        rows: List[dict] = []
        o = 0
        for m in mods:
            for r in m.acts[g].rows:
                rows.append({j + o: v for j, v in r.items()})
            o += m.dim
        acts.append(Matrix(off, off, rows))
    return GradedModule(alg, labels, acts, sums, name="+".join(m.name for m in mods))


def restrict(m: GradedModule, idx: Sequence[int], summands: Optional[List[Summand]] = None) -> GradedModule:
    """The module spanned by basis vectors ``idx`` (must be a direct summand)."""
    idx = list(idx)
    acts = [a.take(idx, idx) for a in m.acts]
    return GradedModule(m.algebra, [m.labels[i] for i in idx], acts, summands, name=m.name)


def projective(alg: GradedAlgebra, v: int) -> GradedModule:
    """``P(v) = A e_v`` with basis the algebra basis elements starting at ``v``."""
    idx = [k for k, b in enumerate(alg.basis) if b.source == v]
    pos = {k: i for i, k in enumerate(idx)}
    labels = [(alg.basis[k].target, alg.basis[k].degree) for k in idx]
    acts = []
    for ai in range(len(alg.arrows)):
        av = alg.arrow_vector(ai)
        m = Matrix(len(idx), len(idx))
        for k in idx:
            for r, c in alg.multiply(av, {k: alg.field.one}).items():
                m.rows[pos[r]][pos[k]] = c
        acts.append(m)
    canon = pos[alg.idempotents[v]]
    mod = GradedModule(alg, labels, acts, [Summand("P", v, 0, 0, len(idx), canon, ("P", v))], name=f"P({alg.vertices[v]})")
    mod.basis_index = idx
    return mod


def simple(alg: GradedAlgebra, v: int) -> GradedModule:
    acts = [Matrix(1, 1) for _ in alg.arrows]
    return GradedModule(alg, [(v, 0)], acts, [Summand("L", v, 0, 0, 1, 0, ("L", v))], name=f"L({alg.vertices[v]})")


def dual_module(m: GradedModule, opposite: Optional[GradedAlgebra] = None) -> GradedModule:
    """``Hom_k(M, k)`` over the opposite algebra, graded by ``(v, -d)``."""
    op = opposite or m.algebra.opposite()
    sums = None
    if m.summands is not None:
        sums = [replace(s, klass=DUAL_CLASS.get(s.klass, s.klass), shift=-s.shift,
                        key=_dual_key(s.key)) for s in m.summands]
    return GradedModule(op, [(v, -d) for v, d in m.labels], [a.T for a in m.acts], sums, name=f"D{m.name}")


def _dual_key(key):
    if key is None:
        return None
    return (DUAL_CLASS.get(key[0], key[0]),) + tuple(key[1:])


def dual_map(f: ModuleMap, ds: Optional[GradedModule] = None, dt: Optional[GradedModule] = None) -> ModuleMap:
    ds = ds or dual_module(f.source)
    dt = dt or dual_module(f.target)
    return ModuleMap(dt, ds, f.matrix.T)


def with_summand(m: GradedModule, klass: str, lam: int, canon: Optional[int] = None, key=None) -> GradedModule:
    """Tag ``m`` as a single catalog summand of class ``klass``."""
    if canon is None:
        hits = m.slots().get((lam, 0), [])
        canon = hits[0] if len(hits) == 1 else None
    out = GradedModule(m.algebra, m.labels, m.acts, [Summand(klass, lam, 0, 0, m.dim, canon, key or (klass, lam))], name=m.name)
    out._basis_acts = m._basis_acts
    for attr in ("lift_index", "project"):
        if hasattr(m, attr):
            setattr(out, attr, getattr(m, attr))
    return out


# ---------------------------------------------------------------------------
# submodules and quotients


class Sub:
    """A submodule given by homogeneous basis vectors of the ambient module."""

    def __init__(self, module: GradedModule, inclusion: ModuleMap):
        self.module = module
        self.inclusion = inclusion


def _slot_of(m: GradedModule, vec: dict) -> Label:
    labs = {m.labels[i] for i in vec}
    if len(labs) != 1:
        raise ValueError("vector is not homogeneous")
    return next(iter(labs))


def _split_homogeneous(m: GradedModule, vec: dict) -> List[dict]:
    parts: Dict[Label, dict] = defaultdict(dict)
    for i, c in vec.items():
        parts[m.labels[i]][i] = c
    return list(parts.values())


def submodule(m: GradedModule, gens: Sequence[dict]) -> Tuple[GradedModule, ModuleMap]:
    """The submodule generated by ``gens`` together with its inclusion."""
    ech: Dict[Label, Echelon] = defaultdict(lambda: Echelon(track=True))
    basis: List[dict] = []
    labels: List[Label] = []
    queue: List[dict] = []
    for g in gens:
        queue.extend(_split_homogeneous(m, g))
    while queue:
        v = queue.pop()
        if not v:
            continue
        lab = _slot_of(m, v)
        if ech[lab].add(v, tag=len(basis)):
            basis.append(v)
            labels.append(lab)
            for a in m.acts:
                w = a.apply(v)
                if w:
                    queue.append(w)
    n = len(basis)
    acts = []
    for a in m.acts:
        cols = []
        for v in basis:
            w = a.apply(v)
            if not w:
                cols.append({})
                continue
            coords = ech[_slot_of(m, w)].coordinates(w)
            cols.append(coords)
        acts.append(Matrix.from_columns(n, cols))
    sub = GradedModule(m.algebra, labels, acts, name=f"sub({m.name})")
    inc = ModuleMap(sub, m, Matrix.from_columns(m.dim, basis))
    return sub, inc


def quotient(m: GradedModule, sub_vectors: Sequence[dict], pivot_key=None) -> Tuple[GradedModule, ModuleMap]:
    """``M / U`` where ``U`` is spanned by ``sub_vectors`` (a submodule).

    The quotient basis is a set of ambient basis vectors complementary to the
    pivots; ``pivot_key`` (default: largest index first) chooses the pivots.
    """
    key = pivot_key or (lambda k: -k)
    ech = Echelon(key=key)
    for v in sub_vectors:
        for part in _split_homogeneous(m, v):
            ech.add(part)
    keep = [i for i in range(m.dim) if i not in ech.rows]
    pos = {i: k for k, i in enumerate(keep)}

    def project(vec: dict) -> dict:
        r, _ = ech.reduce(vec)
        return {pos[i]: c for i, c in r.items()}

    acts = []
    for a in m.acts:
        cols = [project(a.column(i)) for i in keep]
        acts.append(Matrix.from_columns(len(keep), cols))
    q = GradedModule(m.algebra, [m.labels[i] for i in keep], acts, name=f"quot({m.name})")
    proj_cols = [project({i: m.field.one}) for i in range(m.dim)]
    proj = ModuleMap(m, q, Matrix.from_columns(len(keep), proj_cols))
    q.project = project
    q.lift_index = keep
    return q, proj


def kernel(f: ModuleMap) -> Tuple[GradedModule, ModuleMap]:
    m = f.source
    gens = []
    for lab, idx in m.slots().items():
        rows = [{k: f.matrix.rows[r].get(i) for k, i in enumerate(idx) if f.matrix.rows[r].get(i)}
                for r in range(f.matrix.nrows)]
        for v in kernel_of_rows([r for r in rows if r], len(idx), m.field.one):
            gens.append({idx[k]: c for k, c in v.items()})
    return submodule(m, gens)


def image(f: ModuleMap) -> Tuple[GradedModule, ModuleMap]:
    return submodule(f.target, [c for c in f.matrix.columns() if c])


def cokernel(f: ModuleMap) -> Tuple[GradedModule, ModuleMap]:
    return quotient(f.target, [c for c in f.matrix.columns() if c])


@dataclass
class MapSpaces:
    kernel: GradedModule
    kernel_inclusion: ModuleMap
    image: GradedModule
    image_inclusion: ModuleMap
    cokernel: GradedModule
    cokernel_projection: ModuleMap


def map_spaces(f: ModuleMap) -> MapSpaces:
    k, ki = kernel(f)
    im, ii = image(f)
    c, cp = cokernel(f)
    return MapSpaces(k, ki, im, ii, c, cp)


# ---------------------------------------------------------------------------
# radical, top, socle


def radical(m: GradedModule) -> Tuple[GradedModule, ModuleMap]:
    gens = []
    for a in m.acts:
        gens.extend(c for c in a.columns() if c)
    return submodule(m, gens)


def top(m: GradedModule) -> Tuple[GradedModule, ModuleMap]:
    rad, inc = radical(m)
    return quotient(m, inc.matrix.columns())


def socle(m: GradedModule) -> Tuple[GradedModule, ModuleMap]:
    gens = []
    for lab, idx in m.slots().items():
        pos = set(idx)
        rows = []
        for a in m.acts:
            for r in a.rows:
                row = {k: r[i] for k, i in enumerate(idx) if i in r}
                if row:
                    rows.append(row)
        for v in kernel_of_rows(rows, len(idx), m.field.one):
            gens.append({idx[k]: c for k, c in v.items()})
    return submodule(m, gens)


@dataclass
class TopRadSocle:
    top: GradedModule
    top_projection: ModuleMap
    radical: GradedModule
    radical_inclusion: ModuleMap
    socle: GradedModule
    socle_inclusion: ModuleMap


def top_rad_socle(m: GradedModule) -> TopRadSocle:
    r, ri = radical(m)
    t, tp = quotient(m, ri.matrix.columns())
    s, si = socle(m)
    return TopRadSocle(t, tp, r, ri, s, si)


# ---------------------------------------------------------------------------
# projective covers and injective envelopes


def projective_sum(alg: GradedAlgebra, parts: Sequence[Tuple[int, int]], cache: Optional[dict] = None) -> GradedModule:
    """``+ P(v)<s>`` over ``parts = [(v, s), ...]`` in the given order."""
    cache = cache if cache is not None else alg._cache.setdefault("projectives", {})
    mods = []
    for v, s in parts:
        p = cache.get(v)
        if p is None:
            p = cache[v] = projective(alg, v)
        mods.append(shift(p, s))
    return direct_sum(mods, alg)


def map_from_projectives(p: GradedModule, target: GradedModule, images: Sequence[dict]) -> ModuleMap:
    """The map sending the generator of the ``i``-th summand of ``p`` to ``images[i]``."""
    alg = p.algebra
    cols: List[dict] = [{} for _ in range(p.dim)]
    for s, x in zip(p.summands, images):
        idx = [k for k, b in enumerate(alg.basis) if b.source == s.lam]
        for loc, k in enumerate(idx):
            cols[s.offset + loc] = target.act_basis(k).apply(x) if x else {}
    return ModuleMap(p, target, Matrix.from_columns(target.dim, cols))


def projective_cover(m: GradedModule) -> ModuleMap:
    t, proj = top(m)
    parts = []
    images = []
    for q, i in enumerate(t.lift_index):
        v, d = m.labels[i]
        parts.append((v, -d))
        images.append({i: m.field.one})
    p = projective_sum(m.algebra, parts)
    return map_from_projectives(p, m, images)


def injective_envelope(m: GradedModule) -> ModuleMap:
    dm = dual_module(m)
    cover = projective_cover(dm)
    di = dual_module(cover.source, m.algebra)
    return ModuleMap(m, di, cover.matrix.T)


@dataclass
class CoverEnvelope:
    projective_cover: ModuleMap
    injective_envelope: ModuleMap


def cover_envelope(m: GradedModule) -> CoverEnvelope:
    return CoverEnvelope(projective_cover(m), injective_envelope(m))


# ---------------------------------------------------------------------------
# homomorphism spaces


def _is_projective_sum(m: GradedModule) -> bool:
    return m.summands is not None and all(s.klass == "P" for s in m.summands) and bool(m.summands)


def hom_basis(m: GradedModule, n: GradedModule, j: int = 0) -> List[ModuleMap]:
    """A basis of degree-zero maps ``m -> n<j>``."""
    nj = shift(n, j)
    if m.dim == 0 or nj.dim == 0:
        return []
    if _is_projective_sum(m):
        return _hom_from_projectives(m, nj)
    nslots = nj.slots()
    unknowns = []
    for c, lab in enumerate(m.labels):
        for r in nslots.get(lab, []):
            unknowns.append((r, c))
    if not unknowns:
        return []
    ucols: Dict[int, List[int]] = defaultdict(list)
    for r, c in unknowns:
        ucols[c].append(r)
    eqs: Dict[tuple, dict] = defaultdict(dict)
    for g in range(len(m.acts)):
        ng = nj.acts[g]
        mg = m.acts[g]
        # (N_g f)[r2, c] = sum_r N_g[r2, r] f[r, c]
        for (r2, r), v in ng.entries():
            for c in range(m.dim):
                if (nj.labels[r] == m.labels[c]):
                    e = eqs[(g, r2, c)]
                    e[(r, c)] = e.get((r, c), 0) + v
        # (f M_g)[r, c2] = sum_c f[r, c] M_g[c, c2]
        for (c, c2), v in mg.entries():
            for r in ucols.get(c, []):
                e = eqs[(g, r, c2)]
                e[(r, c)] = e.get((r, c), 0) - v
    rows = [{k: x for k, x in e.items() if x} for e in eqs.values()]
    out = []
    for vec in kernel_of_rows(rows, unknowns, m.field.one):
        mat = Matrix.from_entries(nj.dim, m.dim, [(k, v) for k, v in vec.items()])
        out.append(ModuleMap(m, nj, mat))
    return out


def _hom_from_projectives(p: GradedModule, n: GradedModule) -> List[ModuleMap]:
    out = []
    slots = n.slots()
    zero_images = [{} for _ in p.summands]
    for si, s in enumerate(p.summands):
        for x in slots.get((s.lam, -s.shift), []):
            images = list(zero_images)
            images[si] = {x: n.field.one}
            out.append(map_from_projectives(p, n, images))
    return out


def hom_dim(m: GradedModule, n: GradedModule, j: int = 0) -> int:
    return len(hom_basis(m, n, j))


def end_basis(m: GradedModule) -> List[ModuleMap]:
    return hom_basis(m, m, 0)


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Factor:
    module: GradedModule
    klass: Optional[str]
    lam: Optional[int]
    shift: int
    multiplicity: int

    def key(self):
        return (self.klass, self.lam, self.shift, self.multiplicity)


def _scalar(f: Matrix, src: Summand, tgt: Summand):
    return f[tgt.offset + tgt.canon, src.offset + src.canon]


def _canon_for(x: GradedModule) -> Optional[int]:
    if not x.summands or len(x.summands) != 1:
        return None
    return x.summands[0].canon


def split_off(m: GradedModule, x: GradedModule) -> Tuple[int, Optional[GradedModule], Optional[ModuleMap]]:
    """Split the largest power of the catalog module ``x`` off ``m``.

    Returns ``(r, rest, iso)`` where ``m = x^r + rest`` and ``iso`` maps
    ``x^r + rest`` isomorphically onto ``m``.
    """
    canon = _canon_for(x)
    if canon is None:
        return 0, None, None
    fs = hom_basis(x, m, 0)
    gs = hom_basis(m, x, 0)
    if not fs or not gs:
        return 0, None, None
    # pairing matrix of scalar parts of g_k f_i
    pair = [[(g.matrix @ f.matrix)[canon, canon] for f in fs] for g in gs]
    one = m.field.one
    chosen_f: List[int] = []
    chosen_g: List[int] = []
    ech = Echelon()
    for k, row in enumerate(pair):
        vec = {i: c for i, c in enumerate(row) if c}
        if ech.add(vec):
            chosen_g.append(k)
    r = len(chosen_g)
    if r == 0:
        return 0, None, None
    # choose f columns making the r x r submatrix invertible
    sub_rows = [pair[k] for k in chosen_g]
    ech2 = Echelon()
    for i in range(len(fs)):
        col = {k: sub_rows[k][i] for k in range(r) if sub_rows[k][i]}
        if ech2.add(col):
            chosen_f.append(i)
        if len(chosen_f) == r:
            break
    xr = direct_sum([x] * r)
    F = Matrix(m.dim, xr.dim)
    for t, i in enumerate(chosen_f):
        blk = fs[i].matrix
        for (a, b), v in blk.entries():
            F.rows[a][t * x.dim + b] = v
    G = Matrix(xr.dim, m.dim)
    for t, k in enumerate(chosen_g):
        for (a, b), v in gs[k].matrix.entries():
            G.rows[t * x.dim + a][b] = v
    # m = im F (+) ker G since G F is invertible
    gmap = ModuleMap(m, xr, G)
    rest, rest_inc = kernel(gmap)
    iso_cols = F.columns() + rest_inc.matrix.columns()
    iso = Matrix.from_columns(m.dim, iso_cols)
    if rank_of(iso.rows) != m.dim:
        raise IdempotentLiftDiverged("splitting map is not invertible")
    return r, rest, iso


def _is_local(e: List[ModuleMap], field) -> bool:
    """Whether the endomorphism algebra spanned by ``e`` is local (char 0)."""
    n = len(e)
    if n <= 1:
        return True
    if field.p is not None:
        raise IdempotentLiftDiverged("local test for non-catalog summands needs characteristic zero")
    flat = Echelon(track=True)
    for i, f in enumerate(e):
        flat.add(f.matrix.flat(), tag=i)

    def coords(mat: Matrix) -> List:
        c = flat.coordinates(mat.flat()) or {}
        return [c.get(i, 0) for i in range(n)]

    # left regular representation traces
    mult = [[coords(e[i].matrix @ e[j].matrix) for j in range(n)] for i in range(n)]

    def trace_lr(i, j):
        # trace of y -> e_i e_j y
        total = 0
        prod = mult[i][j]
        for k in range(n):
            c = prod[k]
            if c:
                for y in range(n):
                    total += c * mult[k][y][y]
        return total

    form = [{j: trace_lr(i, j) for j in range(n) if trace_lr(i, j)} for i in range(n)]
    rad = kernel_of_rows(form, n, field.one)
    return n - len(rad) == 1


def _fitting_split(m: GradedModule) -> Optional[Tuple[GradedModule, GradedModule]]:
    ends = end_basis(m)
    cands = list(ends)
    for k in range(1, 4):
        combo = Matrix(m.dim, m.dim)
        for i, f in enumerate(ends):
            combo = combo + f.matrix.scale(m.field((i + 1) ** k % 7 + 1))
        cands.append(ModuleMap(m, m, combo))
    for phi in cands:
        for lab, idx in m.slots().items():
            block = phi.matrix.take(idx, idx)
            for c in charpoly_roots(block, m.field):
                psi = phi.matrix - Matrix.identity(m.dim, m.field.one).scale(c)
                power = psi
                for _ in range(m.dim):
                    power = power @ psi
                pm = ModuleMap(m, m, power)
                k, ki = kernel(pm)
                if 0 < k.dim < m.dim:
                    im, ii = image(pm)
                    return k, im
    return None


def decompose(m: GradedModule, catalog=None, prefer: Optional[str] = None) -> List[Factor]:
    """Direct-sum decomposition into indecomposables.

    Catalog members are split off first (as ``(klass, lam, shift)``); what
    remains is split by Fitting decompositions of degree-zero endomorphisms
    and certified indecomposable by a local endomorphism ring.
    """
    out: List[Factor] = []
    rest = m
    if catalog is not None and rest.dim:
        for (klass, lam, sh, x) in catalog.candidates(rest, prefer):
            if rest.dim == 0:
                break
            if not _fits(x, rest):
                continue
            r, nrest, _ = split_off(rest, x)
            if r:
                out.append(Factor(x, klass, lam, sh, r))
                rest = nrest
    if rest.dim:
        for piece in _generic_pieces(rest):
            out.append(Factor(piece, None, None, 0, 1))
    return _merge(out)


def _fits(x: GradedModule, m: GradedModule) -> bool:
    md = m.dims()
    return all(md.get(k, 0) >= v for k, v in x.dims().items())


def _generic_pieces(m: GradedModule) -> List[GradedModule]:
    stack = [m]
    out = []
    while stack:
        x = stack.pop()
        if x.dim == 0:
            continue
        split = _fitting_split(x)
        if split is None:
            if not _is_local(end_basis(x), x.field):
                raise IdempotentLiftDiverged(f"could not split a non-local module with dims {x.dims()}")
            out.append(x)
        else:
            stack.extend(split)
    return out


def _merge(factors: List[Factor]) -> List[Factor]:
    merged: Dict[tuple, Factor] = {}
    order = []
    for f in factors:
        if f.klass is None:
            order.append(f)
            continue
        k = (f.klass, f.lam, f.shift)
        if k in merged:
            merged[k].multiplicity += f.multiplicity
        else:
            merged[k] = Factor(f.module, f.klass, f.lam, f.shift, f.multiplicity)
            order.append(merged[k])
    return order


def is_isomorphic(x: GradedModule, y: GradedModule) -> bool:
    """Isomorphism test for ``x`` with a one-dimensional canonical slot."""
    if x.dims() != y.dims():
        return False
    canon = _canon_for(x)
    if canon is None:
        if _canon_for(y) is None:
            raise ValueError("isomorphism test needs a canonical slot")
        return is_isomorphic(y, x)
    lab = x.labels[canon]
    ys = y.slots().get(lab, [])
    if len(ys) != 1:
        return False
    yc = ys[0]
    fs = hom_basis(x, y, 0)
    gs = hom_basis(y, x, 0)
    f_ok = any(f.matrix[yc, canon] for f in fs)
    g_ok = any(g.matrix[canon, yc] for g in gs)
    if not (f_ok and g_ok):
        return False
    f = next(f for f in fs if f.matrix[yc, canon])
    return f.rank() == x.dim
