"""Graded basic algebras given by quivers with relations.

A :class:`GradedAlgebra` carries a basis of words in its arrows together with
structure constants.  Basis element ``x`` lives in ``e_t A e_s`` where
``s = x.source`` and ``t = x.target``; the product ``x*y`` is nonzero only if
``x.source == y.target`` (the right factor acts first).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .presentation import Arrow, QuiverPresentation, validate
from .scalars import Echelon, Field, vec_add

Word = Tuple[int, ...]


class NotFiniteDimensional(ValueError):
    def __init__(self, degree: int, paths):
        self.degree = degree
        self.paths = paths
        super().__init__(f"nonzero paths survive at degree cap {degree}: {paths[:5]}")


class Degree0NotSemisimple(ValueError):
    pass


@dataclass(frozen=True)
class BasisElement:
    word: Word
    source: int
    target: int
    degree: int


@dataclass(frozen=True)
class AlgebraArrow:
    label: str
    source: int
    target: int
    degree: int


class GradedAlgebra:
    """Finite-dimensional graded algebra with ``A_0`` spanned by idempotents.

    The grading may have negative pieces (Ringel duals of algebras that are
    not balanced); :func:`grading_diagnostics` reports positivity.
    """

    def __init__(self, field: Field, vertices: Sequence[str], arrows: Sequence[AlgebraArrow],
                 basis: Sequence[BasisElement], mult: Dict[Tuple[int, int], dict], name: str = ""):
        self.field = field
        self.vertices = list(vertices)
        self.arrows = list(arrows)
        self.basis = list(basis)
        self.mult = mult
        self.name = name
        self.idempotents = [None] * len(self.vertices)
        self.arrow_index = {}
        for k, b in enumerate(self.basis):
            if not b.word:
                self.idempotents[b.source] = k
            elif len(b.word) == 1:
                self.arrow_index[b.word[0]] = k
        self._opposite = None
        self._cache: dict = {}
        self._word_index = {(b.word, b.source): k for k, b in enumerate(self.basis)}

    # -- basic data -----------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def graded_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = defaultdict(int)
        for b in self.basis:
            out[b.degree] += 1
        return dict(sorted(out.items()))

    def dims_table(self) -> Dict[Tuple[int, int, int], int]:
        """Dimensions of ``e_t A_d e_s`` keyed by ``(s, t, d)``."""
        out: Dict[Tuple[int, int, int], int] = defaultdict(int)
        for b in self.basis:
            out[(b.source, b.target, b.degree)] += 1
        return dict(out)

    def degrees(self) -> List[int]:
        return sorted({b.degree for b in self.basis})

    def __repr__(self):
        return f"GradedAlgebra({self.name!r}, n={self.n}, dim={self.dim}, dims={self.graded_dims()})"

    # -- arithmetic -----------------------------------------------------
    def unit(self) -> dict:
        return {k: self.field.one for k in self.idempotents}

    def basis_vector(self, k: int) -> dict:
        return {k: self.field.one}

    def multiply(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            bi = self.basis[i]
            for j, b in y.items():
                if bi.source != self.basis[j].target:
                    continue
                prod = self.mult.get((i, j))
                if prod:
                    ab = a * b
                    for k, c in prod.items():
                        s = out.get(k)
                        nv = ab * c if s is None else s + ab * c
                        if nv:
                            out[k] = nv
                        else:
                            del out[k]
        return out

    def arrow_vector(self, a: int) -> dict:
        k = self.arrow_index.get(a)
        if k is not None:
            return {k: self.field.one}
        return self._cache["arrow_vectors"][a]

    def word_vector(self, word: Word, vertex: Optional[int] = None) -> dict:
        """The product of the arrows in ``word`` (empty word needs ``vertex``)."""
        if not word:
            return {self.idempotents[vertex]: self.field.one}
        k = self._word_index.get((word, self.arrows[word[-1]].source))
        if k is not None:
            return {k: self.field.one}
        v = self.arrow_vector(word[-1])
        for a in reversed(word[:-1]):
            v = self.multiply(self.arrow_vector(a), v)
            if not v:
                break
        return v

    def opposite(self) -> "GradedAlgebra":
        if self._opposite is None:
            basis = [BasisElement(tuple(reversed(b.word)), b.target, b.source, b.degree) for b in self.basis]
            mult = {(j, i): v for (i, j), v in self.mult.items()}
            arrows = [AlgebraArrow(a.label, a.target, a.source, a.degree) for a in self.arrows]
            op = GradedAlgebra(self.field, self.vertices, arrows, basis, mult, name=f"{self.name}^op")
            if "arrow_vectors" in self._cache:
                op._cache["arrow_vectors"] = self._cache["arrow_vectors"]
            op._opposite = self
            self._opposite = op
        return self._opposite

    def is_positively_graded(self) -> bool:
        return all(b.degree > 0 for b in self.basis if b.word)

    def top_degree(self) -> int:
        return max((b.degree for b in self.basis), default=0)

    def structurally_equal(self, other: "GradedAlgebra") -> bool:
        return (
            self.field == other.field
            and self.vertices == other.vertices
            and self.arrows == other.arrows
            and self.basis == other.basis
            and {k: v for k, v in self.mult.items() if v} == {k: v for k, v in other.mult.items() if v}
        )


# ---------------------------------------------------------------------------
# construction from a presentation


def _paths_by_degree(arrows: Sequence[AlgebraArrow], nverts: int, maxdeg: int):
    """paths[d] = list of (word, source, target) of total degree d."""
    paths: Dict[int, list] = {0: [((), v, v) for v in range(nverts)]}
    for d in range(1, maxdeg + 1):
        cur = []
        for ai, a in enumerate(arrows):
            e = a.degree
            if e == d:
                cur.append(((ai,), a.source, a.target))
            elif 0 < e < d:
                for w, s, t in paths.get(d - e, []):
                    if w and t == a.source:
                        cur.append(((ai,) + w, s, a.target))
        paths[d] = cur
    return paths


def _word_key(word):
    return (-len(word), word)


def default_degree_cap(p: QuiverPresentation) -> int:
    total = sum(sum(_rel_degree(p, r) for r in [rel]) for rel in p.relations)
    return 2 * (len(p.vertices) + total)


def _rel_degree(p, rel):
    return p.word_ends(rel[0][1])[2]


def build_algebra(p: QuiverPresentation, degree_cap: Optional[int] = None) -> GradedAlgebra:
    """The algebra of ``p``, built degree by degree.

    In each degree the two-sided ideal slice is spanned by ``u*r*w`` for
    relations ``r`` and paths ``u``, ``w``; the basis is the set of paths that
    are not leading terms of the reduced ideal slice.
    """
    validate(p)
    fld = p.field
    if degree_cap is None:
        degree_cap = default_degree_cap(p)
    if degree_cap < 2:
        raise ValueError("degree_cap must be at least 2")
    vidx = {v: i for i, v in enumerate(p.vertices)}
    aidx = {a.label: i for i, a in enumerate(p.arrows)}
    arrows = [AlgebraArrow(a.label, vidx[a.source], vidx[a.target], a.degree) for a in p.arrows]
    maxarrow = max((a.degree for a in arrows), default=1)
    rels = []
    for rel in p.relations:
        terms = [(fld(c), tuple(aidx[x] for x in w)) for c, w in rel]
        w0 = terms[0][1]
        rels.append((terms, arrows[w0[-1]].source, arrows[w0[0]].target, sum(arrows[x].degree for x in w0)))

    paths: Dict[int, list] = {0: [((), v, v) for v in range(p.n_vertices if hasattr(p, "n_vertices") else len(p.vertices))]}
    normal: Dict[int, list] = {0: list(paths[0])}
    reducers: Dict[int, Echelon] = {0: Echelon(key=_word_key)}
    empty_run = 0
    d = 0
    top = 0
    while True:
        d += 1
        cur = []
        for ai, a in enumerate(arrows):
            e = a.degree
            if e == d:
                cur.append(((ai,), a.source, a.target))
            elif e < d:
                for w, s, t in paths.get(d - e, []):
                    if w and t == a.source:
                        cur.append(((ai,) + w, s, a.target))
        paths[d] = cur
        ech = Echelon(key=_word_key)
        for terms, rs, rt, rd in rels:
            if rd > d:
                continue
            for du in range(0, d - rd + 1):
                dw = d - rd - du
                for uw, us, ut in paths[du]:
                    if us != rt:
                        continue
                    for ww, ws, wt in paths[dw]:
                        if wt != rs:
                            continue
                        vec = {}
                        for c, w in terms:
                            key = uw + w + ww
                            vec[key] = vec.get(key, 0) + c
                        ech.add({k: v for k, v in vec.items() if v})
        reducers[d] = ech
        normal[d] = [q for q in cur if q[0] not in ech.rows]
        if normal[d]:
            top = d
            empty_run = 0
        else:
            empty_run += 1
        if empty_run >= maxarrow:
            break
        if d >= degree_cap:
            raise NotFiniteDimensional(d, ["*".join(p.arrows[i].label for i in w) for w, _, _ in normal[d]])

    basis: List[BasisElement] = []
    index: Dict[Word, int] = {}
    for v in range(len(p.vertices)):
        basis.append(BasisElement((), v, v, 0))
    for dd in range(1, top + 1):
        for w, s, t in normal[dd]:
            index[w] = len(basis)
            basis.append(BasisElement(w, s, t, dd))

    def normal_form(word, deg):
        if deg > top:
            return {}
        ech = reducers[deg]
        r, _ = ech.reduce({word: fld.one})
        return {index[w]: c for w, c in r.items()}

    mult: Dict[Tuple[int, int], dict] = {}
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            if x.source != y.target:
                continue
            if not x.word:
                mult[(i, j)] = {j: fld.one}
            elif not y.word:
                mult[(i, j)] = {i: fld.one}
            else:
                nf = normal_form(x.word + y.word, x.degree + y.degree)
                if nf:
                    mult[(i, j)] = nf
    alg = GradedAlgebra(fld, p.vertices, arrows, basis, mult, name=p.name)
    missing = [ai for ai in range(len(arrows)) if ai not in alg.arrow_index]
    if missing:
        alg._cache["arrow_vectors"] = {
            ai: normal_form((ai,), arrows[ai].degree) for ai in range(len(arrows))
        }
    alg._cache["presentation"] = p
    return alg


# ---------------------------------------------------------------------------
# construction from structure constants


def from_structure_constants(field: Field, vertices: Sequence[str], tags: Sequence[Tuple[int, int, int]],
                             mult: Dict[Tuple[int, int], dict], idempotents: Sequence[int],
                             name: str = "", arrow_prefix: str = "x") -> Tuple[GradedAlgebra, List[dict]]:
    """Normalize an algebra given by raw structure constants.

    ``tags[k] = (source, target, degree)``; the span of the non-idempotent
    basis elements must be the Jacobson radical.  Returns the algebra on a
    basis of arrow words and, for each new basis element, its expression in
    the raw basis.
    """
    dim = len(tags)
    idem = set(idempotents)
    raw = list(range(dim))

    def rmul(x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                if tags[i][0] != tags[j][1]:
                    continue
                prod = mult.get((i, j))
                if prod:
                    out = vec_add(out, prod, a * b)
        return out

    rad = [k for k in raw if k not in idem]
    sq = Echelon()
    for i in rad:
        for j in rad:
            if tags[i][0] == tags[j][1]:
                prod = mult.get((i, j))
                if prod:
                    sq.add(prod)
    arrow_raw: List[int] = []
    blocks: Dict[tuple, list] = defaultdict(list)
    for k in rad:
        blocks[tags[k]].append(k)
    for key in sorted(blocks, key=lambda t: (t[2], t[0], t[1])):
        e = Echelon()
        for row in sq.basis():
            e.add(row)
        for k in blocks[key]:
            if e.add({k: field.one}):
                arrow_raw.append(k)
    arrows = [AlgebraArrow(f"{arrow_prefix}{i + 1}", tags[k][0], tags[k][1], tags[k][2])
              for i, k in enumerate(arrow_raw)]

    ech = Echelon(track=True)
    words: List[Tuple[Word, dict, Tuple[int, int, int]]] = []
    for v in range(len(vertices)):
        k = idempotents[v]
        ech.add({k: field.one}, tag=len(words))
        words.append(((), {k: field.one}, (v, v, 0)))
    layer = []
    for ai, k in enumerate(arrow_raw):
        vec = {k: field.one}
        if ech.add(vec, tag=len(words)):
            words.append(((ai,), vec, tags[k]))
        layer.append(((ai,), vec, tags[k]))
    while layer:
        nxt = []
        layer_ech = Echelon()
        for ai, k in enumerate(arrow_raw):
            a = arrows[ai]
            for w, vec, (s, t, d) in layer:
                if t != a.source:
                    continue
                prod = rmul({k: field.one}, vec)
                if not prod:
                    continue
                if layer_ech.add(prod):
                    item = ((ai,) + w, prod, (s, a.target, d + a.degree))
                    nxt.append(item)
                    if ech.add(prod, tag=len(words)):
                        words.append(item)
        layer = nxt
    if len(words) != dim:
        raise ValueError(f"arrows do not generate the algebra ({len(words)} of {dim})")
    basis = [BasisElement(w, s, t, d) for w, _, (s, t, d) in words]
    new_mult: Dict[Tuple[int, int], dict] = {}
    for i, (wi, vi, ti) in enumerate(words):
        for j, (wj, vj, tj) in enumerate(words):
            if ti[0] != tj[1]:
                continue
            prod = rmul(vi, vj)
            if prod:
                coords = ech.coordinates(prod)
                new_mult[(i, j)] = {k: c for k, c in coords.items() if c}
    alg = GradedAlgebra(field, vertices, arrows, basis, new_mult, name=name)
    return alg, [vec for _, vec, _ in words]


# ---------------------------------------------------------------------------
# combinations


def relabel(a: GradedAlgebra, order: Sequence[int], labels: Optional[Sequence[str]] = None,
            name: Optional[str] = None) -> GradedAlgebra:
    """Reorder vertices: new vertex ``i`` is old vertex ``order[i]``."""
    pos = {old: new for new, old in enumerate(order)}
    verts = list(labels) if labels is not None else [a.vertices[o] for o in order]
    arrows = [AlgebraArrow(x.label, pos[x.source], pos[x.target], x.degree) for x in a.arrows]
    basis = [BasisElement(b.word, pos[b.source], pos[b.target], b.degree) for b in a.basis]
    out = GradedAlgebra(a.field, verts, arrows, basis, dict(a.mult), name=name or a.name)
    if "arrow_vectors" in a._cache:
        out._cache["arrow_vectors"] = a._cache["arrow_vectors"]
    return out


def opposite(a: GradedAlgebra) -> GradedAlgebra:
    return a.opposite()


def direct_sum(a: GradedAlgebra, b: GradedAlgebra) -> GradedAlgebra:
    if a.field != b.field:
        raise ValueError("field mismatch")
    off = a.dim
    na = a.n
    tags = [(x.source, x.target, x.degree) for x in a.basis]
    tags += [(x.source + na, x.target + na, x.degree) for x in b.basis]
    mult = {k: dict(v) for k, v in a.mult.items()}
    for (i, j), v in b.mult.items():
        mult[(i + off, j + off)] = {k + off: c for k, c in v.items()}
    verts = _unique_labels([f"{v}" for v in a.vertices] + [f"{v}" for v in b.vertices], a.vertices, b.vertices)
    idem = list(a.idempotents) + [k + off for k in b.idempotents]
    alg, _ = from_structure_constants(a.field, verts, tags, mult, idem, name=f"{a.name}+{b.name}")
    return alg


def _unique_labels(labels, va, vb):
    if len(set(labels)) == len(labels):
        return labels
    return [f"{v}_1" for v in va] + [f"{v}_2" for v in vb]


def tensor(a: GradedAlgebra, b: GradedAlgebra) -> GradedAlgebra:
    """Tensor product over the field; vertices ordered lexicographically."""
    if a.field != b.field:
        raise ValueError("field mismatch")
    nb = b.n
    db = b.dim
    tags = []
    for x in a.basis:
        for y in b.basis:
            tags.append((x.source * nb + y.source, x.target * nb + y.target, x.degree + y.degree))
    mult: Dict[Tuple[int, int], dict] = {}
    for (i, k), v in a.mult.items():
        for (j, l), w in b.mult.items():
            prod = {}
            for p, c in v.items():
                for q, e in w.items():
                    prod[p * db + q] = c * e
            mult[(i * db + j, k * db + l)] = prod
    idem = [a.idempotents[u] * db + b.idempotents[v] for u in range(a.n) for v in range(nb)]
    verts = [f"{u}_{v}" for u in a.vertices for v in b.vertices]
    alg, _ = from_structure_constants(a.field, verts, tags, mult, idem, name=f"{a.name}*{b.name}")
    return alg


def truncate(a: GradedAlgebra, vertex: int) -> GradedAlgebra:
    """The quotient ``A / A e_n A`` by the maximal vertex ``n``."""
    if vertex != a.n - 1:
        raise ValueError("truncation is only defined at the maximal vertex")
    ideal = Echelon()
    for i, x in enumerate(a.basis):
        if x.source != vertex:
            continue
        for j, y in enumerate(a.basis):
            if y.target != vertex:
                continue
            prod = a.mult.get((i, j))
            if prod:
                ideal.add(prod)
    keep = [k for k in range(a.dim) if k not in ideal.rows]
    pos = {k: i for i, k in enumerate(keep)}
    tags = [(a.basis[k].source, a.basis[k].target, a.basis[k].degree) for k in keep]
    mult = {}
    for i in keep:
        for j in keep:
            prod = a.mult.get((i, j))
            if prod:
                r, _ = ideal.reduce(prod)
                if r:
                    mult[(pos[i], pos[j])] = {pos[k]: c for k, c in r.items()}
    idem = [pos[a.idempotents[v]] for v in range(a.n - 1)]
    alg, _ = from_structure_constants(a.field, a.vertices[:-1], tags, mult, idem, name=f"{a.name}/e{a.vertices[-1]}")
    return alg


def combine(mode: str, a: GradedAlgebra, b: Optional[GradedAlgebra] = None, vertex: Optional[int] = None) -> GradedAlgebra:
    if mode == "opposite":
        return a.opposite()
    if mode == "direct_sum":
        return direct_sum(a, b)
    if mode == "tensor":
        return tensor(a, b)
    if mode == "truncate":
        return truncate(a, a.n - 1 if vertex is None else vertex)
    raise ValueError(f"unknown combination mode {mode!r}")


# ---------------------------------------------------------------------------
# presentations of algebras


def extract_presentation(a: GradedAlgebra, name: Optional[str] = None) -> QuiverPresentation:
    """Arrows and a minimal set of homogeneous relations for ``a``."""
    if not a.is_positively_graded():
        raise Degree0NotSemisimple(f"{a.name}: degree-0 part is not spanned by the idempotents")
    fld = a.field
    arrows = a.arrows
    maxarrow = max((x.degree for x in arrows), default=1)
    top = a.top_degree()
    paths = _paths_by_degree(arrows, a.n, top + 2 * maxarrow + 1)
    relations: List[Tuple[dict, int]] = []
    rels_out = []
    stable = 0
    d = 1
    while True:
        d += 1
        if d not in paths:
            more = _paths_by_degree(arrows, a.n, d)
            paths.update(more)
        cur = paths[d]
        keys = [w for w, _, _ in cur]
        # kernel of path span -> algebra
        images = Echelon(track=True)
        kernel = []
        for w, s, t in cur:
            img = a.word_vector(w)
            r, c = images.reduce(img, {w: fld.one})
            if r:
                images.add(img, tag=w)
            else:
                kernel.append({k: v for k, v in c.items() if v})
        ideal = Echelon(key=_word_key)
        for rel, rd in relations:
            for du in range(0, d - rd + 1):
                dw = d - rd - du
                for uw, us, ut in paths[du]:
                    for ww, ws, wt in paths[dw]:
                        vec = {}
                        ok = True
                        for w, c in rel.items():
                            src, tgt = arrows[w[-1]].source, arrows[w[0]].target
                            if us != tgt or wt != src:
                                ok = False
                                break
                            key = uw + w + ww
                            vec[key] = vec.get(key, 0) + c
                        if ok:
                            ideal.add({k: v for k, v in vec.items() if v})
        new = 0
        for kv in kernel:
            if ideal.add(kv):
                relations.append((kv, d))
                rels_out.append(kv)
                new += 1
        if d > top and new == 0:
            stable += 1
            if stable >= maxarrow:
                break
        else:
            stable = 0
        if not keys and d > top + maxarrow:
            break
    p = QuiverPresentation(
        name or a.name,
        fld,
        list(a.vertices),
        [Arrow(x.label, a.vertices[x.source], a.vertices[x.target], x.degree) for x in arrows],
        [_relation_terms(r, arrows) for r in rels_out],
    )
    return validate(p)


def _relation_terms(vec: dict, arrows) -> list:
    # scale so that the first term has coefficient 1
    items = sorted(vec.items(), key=lambda kv: _word_key(kv[0]))
    lead = items[0][1]
    return [(c / lead, tuple(arrows[i].label for i in w)) for w, c in items]


@dataclass
class GradingDiagnostics:
    positively_graded: bool
    quadratic: bool
    graded_dims: Dict[int, int]


def grading_diagnostics(a: GradedAlgebra) -> GradingDiagnostics:
    pos = a.is_positively_graded()
    quad = False
    if pos:
        p = a._cache.get("extracted")
        if p is None:
            p = extract_presentation(a)
            a._cache["extracted"] = p
        quad = all(x.degree == 1 for x in a.arrows) and all(
            p.word_ends(r[0][1])[2] == 2 for r in p.relations
        )
    return GradingDiagnostics(pos, quad, a.graded_dims())


def check_associativity(a: GradedAlgebra) -> bool:
    for i in range(a.dim):
        for j in range(a.dim):
            if a.basis[i].source != a.basis[j].target:
                continue
            xy = a.mult.get((i, j), {})
            for k in range(a.dim):
                if a.basis[j].source != a.basis[k].target:
                    continue
                left = a.multiply(xy, {k: a.field.one})
                right = a.multiply({i: a.field.one}, a.mult.get((j, k), {}))
                if left != right:
                    return False
    return True
