"""Quiver-with-relations presentations: parsing, validation, rendering, corpus.

The text format is line oriented::

    # comments run to the end of the line
    algebra ex25
    field Q
    vertices 1 2 3
    arrow a : 1 -> 2
    arrow b : 2 -> 1 [deg 1]
    relations
    a*b; c*d

In a word ``x*y`` the right factor ``y`` acts first, so ``a*b`` above is the
path ``2 -> 1 -> 2``.  The listed vertex order is the quasi-hereditary order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .scalars import RATIONALS, Field

Word = Tuple[str, ...]
Term = Tuple[object, Word]


class PresentationError(ValueError):
    """Invalid presentation; ``line``/``column`` locate the offending token."""

    def __init__(self, message: str, line: int = 0, column: int = 0, token: str = ""):
        self.line = line
        self.column = column
        self.token = token
        self.message = message
        where = f"line {line}, column {column}: " if line else ""
        tok = f" (at {token!r})" if token else ""
        super().__init__(f"{where}{message}{tok}")


class ParseError(PresentationError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str
    degree: int = 1


@dataclass
class QuiverPresentation:
    name: str
    field: Field = RATIONALS
    vertices: List[str] = dc_field(default_factory=list)
    arrows: List[Arrow] = dc_field(default_factory=list)
    relations: List[List[Term]] = dc_field(default_factory=list)

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)

    def word_ends(self, word: Word) -> Tuple[str, str, int]:
        """(source, target, degree) of a composable word."""
        arrows = {a.label: a for a in self.arrows}
        src = arrows[word[-1]].source
        tgt = arrows[word[0]].target
        return src, tgt, sum(arrows[x].degree for x in word)

    def __eq__(self, other):
        if not isinstance(other, QuiverPresentation):
            return NotImplemented
        return (
            self.name == other.name
            and self.field == other.field
            and self.vertices == other.vertices
            and self.arrows == other.arrows
            and _canon_relations(self.relations) == _canon_relations(other.relations)
        )

    def summary(self) -> dict:
        return {
            "name": self.name,
            "vertices": len(self.vertices),
            "arrows": len(self.arrows),
            "relations": len(self.relations),
        }


def _canon_relations(rels):
    return [sorted(((w, str(c)) for c, w in r)) for r in rels]


# ---------------------------------------------------------------------------
# validation


def validate(p: QuiverPresentation) -> QuiverPresentation:
    """Check the invariants of a presentation; return it unchanged."""
    seen = set()
    for v in p.vertices:
        if v in seen:
            raise PresentationError("duplicate vertex label", token=v)
        seen.add(v)
    labels = set()
    for a in p.arrows:
        if a.label in labels or a.label in seen:
            raise PresentationError("duplicate label", token=a.label)
        labels.add(a.label)
        for end in (a.source, a.target):
            if end not in seen:
                raise PresentationError("arrow endpoint is not a vertex", token=end)
        if not isinstance(a.degree, int) or a.degree < 1:
            raise PresentationError("arrow degree must be a positive integer", token=a.label)
    arrows = {a.label: a for a in p.arrows}
    for rel in p.relations:
        _check_relation(rel, arrows)
    return p


def _check_relation(rel: List[Term], arrows: Dict[str, Arrow], pos=(0, 0)):
    ends = None
    if not rel:
        raise PresentationError("empty relation", *pos)
    for c, word in rel:
        if not word:
            raise PresentationError("relation term without a path", *pos)
        for x in word:
            if x not in arrows:
                raise PresentationError("unknown arrow", *pos, token=x)
        for left, right in zip(word, word[1:]):
            if arrows[left].source != arrows[right].target:
                raise PresentationError(
                    "non-composable word", *pos, token="*".join(word)
                )
        e = (arrows[word[-1]].source, arrows[word[0]].target, sum(arrows[x].degree for x in word))
        if ends is None:
            ends = e
        elif e != ends:
            raise PresentationError("inhomogeneous relation", *pos, token="*".join(word))
    if ends[2] < 2:
        raise PresentationError("relation of degree < 2", *pos, token="*".join(rel[0][1]))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?(?![\w']))|(?P<ident>\w[\w']*)|(?P<op>[*+\-;]))"
)
_IDENT = re.compile(r"^\w[\w']*$")
_ARROW_LABEL = re.compile(r"^(?!\d+$)\w[\w']*$")


def parse(text: str) -> QuiverPresentation:
    """Parse and validate a presentation from the text format."""
    name = None
    fld = RATIONALS
    vertices: Optional[List[str]] = None
    arrows: List[Arrow] = []
    rel_chunks: List[Tuple[int, int, str]] = []
    in_relations = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip()) + 1
        head, _, rest = stripped.partition(" ")
        rest_col = indent + len(head) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if head == "algebra" and not in_relations:
            if not rest or not re.match(r"^\S+$", rest):
                raise ParseError("expected an algebra name", lineno, rest_col, rest)
            name = rest
        elif head == "field" and not in_relations:
            try:
                fld = Field.parse(rest)
            except ValueError:
                raise ParseError("expected Q or Fp:<prime>", lineno, rest_col, rest) from None
        elif head == "vertices" and not in_relations:
            if vertices is not None:
                raise ParseError("second vertices line", lineno, indent, head)
            vertices = rest.split()
            for v in vertices:
                if not _IDENT.match(v):
                    raise ParseError("bad vertex label", lineno, rest_col + rest.find(v), v)
        elif head == "arrow" and not in_relations:
            arrows.append(_parse_arrow(rest, lineno, rest_col))
        elif head == "relations":
            in_relations = True
            if rest:
                rel_chunks.append((lineno, rest_col, rest))
        elif in_relations:
            rel_chunks.append((lineno, indent, stripped))
        else:
            raise ParseError("unknown directive", lineno, indent, head)
    if name is None:
        raise ParseError("missing 'algebra NAME' header", 1, 1)
    if vertices is None:
        raise ParseError("missing 'vertices' line", 1, 1)
    p = QuiverPresentation(name, fld, vertices, arrows, [])
    try:
        validate(p)
    except PresentationError as exc:
        line, col = _locate(text, exc.token)
        raise PresentationError(exc.message, line, col, exc.token) from None
    amap = {a.label: a for a in arrows}
    for lineno, col, chunk in rel_chunks:
        for rel, pos in _parse_relations(chunk, lineno, col, fld):
            try:
                _check_relation(rel, amap, pos)
            except PresentationError as exc:
                if not exc.line:
                    raise PresentationError(exc.message, *pos, exc.token) from None
                raise
            p.relations.append(rel)
    return p


def _locate(text: str, token: str):
    if not token:
        return 1, 1
    for lineno, line in enumerate(text.splitlines(), start=1):
        col = line.find(token)
        if col >= 0:
            return lineno, col + 1
    return 1, 1


_ARROW = re.compile(
    r"^(?P<label>\S+)\s*:\s*(?P<src>\S+)\s*->\s*(?P<tgt>[^\s\[]+)\s*"
    r"(?:\[?\s*deg\s+(?P<deg>-?\d+)\s*\]?)?\s*$"
)


def _parse_arrow(rest: str, lineno: int, col: int) -> Arrow:
    m = _ARROW.match(rest)
    if not m:
        raise ParseError("expected 'arrow LABEL : SRC -> TGT [deg K]'", lineno, col, rest)
    label = m.group("label")
    if not _ARROW_LABEL.match(label):
        raise ParseError("bad arrow label", lineno, col, label)
    deg = int(m.group("deg")) if m.group("deg") else 1
    if deg < 1:
        raise ParseError("arrow degree must be positive", lineno, col + m.start("deg"), m.group("deg"))
    return Arrow(label, m.group("src"), m.group("tgt"), deg)


def _tokenize(chunk: str, lineno: int, col0: int):
    pos = 0
    out = []
    while pos < len(chunk):
        if chunk[pos:].strip() == "":
            break
        m = _TOKEN.match(chunk, pos)
        if not m or m.end() == pos:
            bad = chunk[pos:].strip()[:1]
            raise ParseError("unexpected character", lineno, col0 + pos + (len(chunk[pos:]) - len(chunk[pos:].lstrip())), bad)
        kind = m.lastgroup
        tok = m.group(kind)
        out.append((kind, tok, col0 + m.start(kind)))
        pos = m.end()
    return out


def _parse_relations(chunk: str, lineno: int, col0: int, fld: Field):
    tokens = _tokenize(chunk, lineno, col0)
    i = 0
    rels = []
    current: Dict[Word, object] = {}
    start = (lineno, col0)
    order: List[Word] = []

    def finish():
        rel = [(current[w], w) for w in order if current[w]]
        if order:
            if not rel:
                raise ParseError("relation is identically zero", *start)
            rels.append((rel, start))

    expect_term = True
    while i < len(tokens):
        kind, tok, col = tokens[i]
        if kind == "op" and tok == ";":
            if expect_term and order:
                raise ParseError("dangling operator", lineno, col, tok)
            finish()
            current, order = {}, []
            expect_term = True
            i += 1
            if i < len(tokens):
                start = (lineno, tokens[i][2])
            continue
        sign = 1
        if kind == "op" and tok in "+-":
            if tok == "-":
                sign = -1
            i += 1
            if i >= len(tokens):
                raise ParseError("dangling operator", lineno, col, tok)
            kind, tok, col = tokens[i]
        elif not expect_term:
            raise ParseError("expected '+', '-' or ';'", lineno, col, tok)
        coef = Fraction(sign)
        if kind == "num" and (i + 1 < len(tokens) and (tokens[i + 1][0] == "ident" or tokens[i + 1][1] == "*")):
            coef *= Fraction(tok)
            i += 1
            if i < len(tokens) and tokens[i][1] == "*":
                i += 1
            if i >= len(tokens):
                raise ParseError("coefficient without a path", lineno, col, tok)
            kind, tok, col = tokens[i]
        if kind != "ident":
            raise ParseError("expected a path", lineno, col, tok)
        word = [tok]
        i += 1
        while i + 1 < len(tokens) and tokens[i][1] == "*" and tokens[i + 1][0] == "ident":
            word.append(tokens[i + 1][1])
            i += 2
        if i < len(tokens) and tokens[i][1] == "*":
            raise ParseError("dangling '*'", lineno, tokens[i][2], "*")
        w = tuple(word)
        if w not in current:
            current[w] = fld(0)
            order.append(w)
        current[w] = current[w] + fld(coef)
        expect_term = False
    finish()
    return rels


# ---------------------------------------------------------------------------
# rendering


def render(p: QuiverPresentation) -> str:
    lines = [f"algebra {p.name}", f"field {p.field}", "vertices " + " ".join(p.vertices)]
    for a in p.arrows:
        deg = f" [deg {a.degree}]" if a.degree != 1 else ""
        lines.append(f"arrow {a.label} : {a.source} -> {a.target}{deg}")
    lines.append("relations")
    for rel in p.relations:
        lines.append(_render_relation(rel))
    return "\n".join(lines) + "\n"


def _render_relation(rel: List[Term]) -> str:
    parts = []
    for k, (c, word) in enumerate(rel):
        c = Fraction(str(c)) if p_is_rational(c) else Fraction(int(c))
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coef = "" if mag == 1 else f"{mag} "
        body = coef + "*".join(word)
        if k == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def p_is_rational(c) -> bool:
    return not hasattr(c, "p")


# ---------------------------------------------------------------------------
# corpus

_CORPUS_HELP = [
    "ex24",
    "ex24(m)",
    "ex25",
    "ex25_ringel_target",
    "directed_chain(n)",
    "semisimple(n)",
]


def corpus_names() -> List[str]:
    return list(_CORPUS_HELP)


def corpus(name: str, field: Field = RATIONALS) -> QuiverPresentation:
    """A presentation from the built-in example corpus."""
    m = re.fullmatch(r"\s*([a-z_0-9]+?)\s*(?:\(\s*(\d+)\s*\))?\s*", name)
    if not m:
        raise KeyError(f"unknown corpus entry {name!r}")
    base, arg = m.group(1), m.group(2)
    k = int(arg) if arg is not None else None
    one = field(1)
    if base == "ex24":
        k = 3 if k is None else k
        if k < 1:
            raise KeyError("ex24(m) needs m >= 1")
        arrows = [Arrow(f"a{i}", "1", "2") for i in range(1, k + 1)]
        arrows += [Arrow(f"b{i}", "2", "1") for i in range(1, k + 1)]
        rels = [[(one, (f"a{i}", f"b{j}"))] for i in range(1, k + 1) for j in range(1, k + 1)]
        title = "ex24" if k == 3 else f"ex24({k})"
        return validate(QuiverPresentation(title, field, ["1", "2"], arrows, rels))
    if base == "ex25" and k is None:
        arrows = [Arrow("a", "1", "2"), Arrow("b", "2", "1"), Arrow("c", "2", "3"), Arrow("d", "3", "2")]
        rels = [[(one, ("a", "b"))], [(one, ("c", "d"))]]
        return validate(QuiverPresentation("ex25", field, ["1", "2", "3"], arrows, rels))
    if base == "ex25_ringel_target" and k is None:
        arrows = [
            Arrow("alpha", "1", "3"),
            Arrow("gamma", "2", "3"),
            Arrow("beta", "3", "1"),
            Arrow("delta", "3", "2"),
        ]
        rels = [
            [(one, ("beta", "alpha"))],
            [(one, ("delta", "gamma"))],
            [(one, ("beta", "gamma", "delta", "alpha"))],
        ]
        return validate(QuiverPresentation("ex25_ringel_target", field, ["1", "2", "3"], arrows, rels))
    if base == "directed_chain" and k is not None and k >= 1:
        verts = [str(i) for i in range(1, k + 1)]
        arrows = [Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, k)]
        return validate(QuiverPresentation(f"directed_chain({k})", field, verts, arrows, []))
    if base == "semisimple" and k is not None and k >= 1:
        verts = [str(i) for i in range(1, k + 1)]
        return validate(QuiverPresentation(f"semisimple({k})", field, verts, [], []))
    raise KeyError(f"unknown corpus entry {name!r}")
