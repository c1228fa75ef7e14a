"""Exact field arithmetic and sparse linear algebra.

Everything downstream reduces to rank and kernel computations over a field,
either the rationals or a prime field.  Vectors are plain ``dict`` objects
mapping a coordinate (any hashable key) to a nonzero scalar; matrices are
:class:`Matrix` objects stored as a list of sparse rows.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, NamedTuple, Optional

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction

Vector = Dict[Hashable, object]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class FpElement:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            return other.v
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return FpElement(self.v * pow(o, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o, self.p) / self

    def __pow__(self, k: int):
        if k < 0:
            return FpElement(1, self.p) / FpElement(pow(self.v, -k, self.p), self.p)
        return FpElement(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.v == o

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


class Field:
    """The rationals (``p is None``) or the prime field F_p."""

    def __init__(self, p: Optional[int] = None):
        if p is not None:
            if not _is_prime(p) or p >= 2**63:
                raise ValueError(f"{p} is not a word-sized prime")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else "prime_field"

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text in ("Q", "QQ"):
            return RATIONALS
        if text.startswith("Fp:"):
            return cls(int(text[3:]))
        raise ValueError(f"unknown field {text!r}; expected Q or Fp:<p>")

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, FpElement):
                raise TypeError("cannot coerce a residue class to Q")
            return _rational(x)
        if isinstance(x, FpElement):
            return FpElement(x.v, self.p)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, int):
            return FpElement(x, self.p)
        x = Fraction(x)
        return FpElement(x.numerator, self.p) / FpElement(x.denominator, self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __str__(self):
        return "Q" if self.p is None else f"Fp:{self.p}"

    __repr__ = __str__


RATIONALS = Field()


def format_scalar(x) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# sparse matrices


class Matrix:
    """A ``nrows x ncols`` matrix stored as sparse rows ``{col: value}``."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Optional[List[dict]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [{} for _ in range(nrows)]

    @classmethod
    def from_dense(cls, data, field: Field = RATIONALS, ncols: Optional[int] = None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            row = {}
            for j, v in enumerate(r):
                x = field(v)
                if x:
                    row[j] = x
            rows.append(row)
        return cls(len(data), ncols, rows)

    @classmethod
    def identity(cls, n: int, one) -> "Matrix":
        return cls(n, n, [{i: one} for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries) -> "Matrix":
        m = cls(nrows, ncols)
        for (i, j), v in entries:
            if v:
                m.rows[i][j] = v
        return m

    def copy(self) -> "Matrix":
        return Matrix(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def to_dense(self, zero=0):
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, 0)

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                yield (i, j), v

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other.rows
        out = []
        for r in self.rows:
            acc: dict = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    s = acc.get(j)
                    acc[j] = a * b if s is None else s + a * b
            out.append({j: v for j, v in acc.items() if v})
        return Matrix(self.nrows, other.ncols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, self.ncols, [vec_add(a, b) for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        if not c:
            return Matrix(self.nrows, self.ncols)
        return Matrix(self.nrows, self.ncols, [{j: v * c for j, v in r.items()} for r in self.rows])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "Matrix":
        out = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[j][i] = v
        return Matrix(self.ncols, self.nrows, out)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse column vector keyed by column index."""
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, v in r.items():
                x = vec.get(j)
                if x:
                    s = s + v * x
            if s:
                out[i] = s
        return out

    def column(self, j: int) -> dict:
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def columns(self) -> List[dict]:
        cols: List[dict] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    @classmethod
    def from_columns(cls, nrows: int, cols: List[dict]) -> "Matrix":
        m = cls(nrows, len(cols))
        for j, c in enumerate(cols):
            for i, v in c.items():
                if v:
                    m.rows[i][j] = v
        return m

    def take(self, row_idx, col_idx) -> "Matrix":
        cpos = {c: k for k, c in enumerate(col_idx)}
        rows = []
        for i in row_idx:
            rows.append({cpos[j]: v for j, v in self.rows[i].items() if j in cpos})
        return Matrix(len(row_idx), len(col_idx), rows)

    def flat(self) -> dict:
        return {(i, j): v for i, r in enumerate(self.rows) for j, v in r.items()}

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, nnz={sum(len(r) for r in self.rows)})"


def block_matrix(blocks, row_sizes, col_sizes) -> Matrix:
    """Assemble ``blocks[(I, J)]`` into one matrix; missing blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    m = Matrix(roff[-1], coff[-1])
    for (I, J), b in blocks.items():
        for i, r in enumerate(b.rows):
            row = m.rows[roff[I] + i]
            for j, v in r.items():
                row[coff[J] + j] = v
    return m


def vec_add(a: dict, b: dict, c=1) -> dict:
    """Return ``a + c*b`` without mutating the inputs."""
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        nv = v * c if s is None else s + v * c
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def vec_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def _sort_key(k):
    return k


class Echelon:
    """Incrementally maintained reduced row echelon form.

    With ``track=True`` every stored row remembers how it was combined from
    the tagged generators passed to :meth:`add`, so :meth:`coordinates`
    can express a vector in terms of those generators.
    """

    def __init__(self, track: bool = False, key=None):
        self.track = track
        self.key = key or _sort_key
        self.rows: Dict[Hashable, dict] = {}
        self.combos: Dict[Hashable, dict] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return list(self.rows)

    def reduce(self, vec: dict, combo: Optional[dict] = None):
        v = dict(vec)
        c = dict(combo) if combo is not None else {}
        for p in [k for k in v if k in self.rows]:
            a = v.get(p)
            if not a:
                continue
            row = self.rows[p]
            for k, x in row.items():
                s = v.get(k)
                nv = -a * x if s is None else s - a * x
                if nv:
                    v[k] = nv
                else:
                    del v[k]
            if self.track:
                for t, x in self.combos[p].items():
                    s = c.get(t)
                    nv = -a * x if s is None else s - a * x
                    if nv:
                        c[t] = nv
                    else:
                        c.pop(t, None)
        return v, c

    def add(self, vec: dict, tag=None) -> bool:
        combo = {tag: 1} if self.track else None
        r, c = self.reduce(vec, combo)
        if not r:
            return False
        p = min(r, key=self.key)
        inv = 1 / r[p]
        r = {k: x * inv for k, x in r.items()}
        if self.track:
            c = {t: x * inv for t, x in c.items()}
        for q, row in self.rows.items():
            a = row.get(p)
            if a:
                for k, x in r.items():
                    s = row.get(k)
                    nv = -a * x if s is None else s - a * x
                    if nv:
                        row[k] = nv
                    else:
                        del row[k]
                if self.track:
                    cq = self.combos[q]
                    for t, x in c.items():
                        s = cq.get(t)
                        nv = -a * x if s is None else s - a * x
                        if nv:
                            cq[t] = nv
                        else:
                            cq.pop(t, None)
        self.rows[p] = r
        if self.track:
            self.combos[p] = c
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def coordinates(self, vec: dict) -> Optional[dict]:
        """Coefficients ``c`` with ``vec = sum c[tag] * generator[tag]``, or None."""
        if not self.track:
            raise ValueError("coordinates need track=True")
        r, c = self.reduce(vec, {})
        if r:
            return None
        return {t: -x for t, x in c.items() if x}

    def basis(self) -> List[dict]:
        return [dict(r) for r in self.rows.values()]


def rank_of(vectors: Iterable[dict]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def kernel_of_rows(rows: Iterable[dict], ncols_or_keys, one=1) -> List[dict]:
    """Null space of the linear forms ``rows``.

    ``ncols_or_keys`` is either a column count or an explicit ordered list of
    unknown keys; the kernel vectors are keyed the same way.
    """
    keys = list(range(ncols_or_keys)) if isinstance(ncols_or_keys, int) else list(ncols_or_keys)
    order = {k: i for i, k in enumerate(keys)}
    e = Echelon(key=order.__getitem__)
    for r in rows:
        if r:
            e.add(r)
    out = []
    for f in keys:
        if f in e.rows:
            continue
        vec = {f: one}
        for p, row in e.rows.items():
            a = row.get(f)
            if a:
                vec[p] = -a
        out.append(vec)
    return out


class RowReduction(NamedTuple):
    rank: int
    kernel_basis: List[List]
    image_basis: List[List]


def row_reduce(m: Matrix, field: Field = RATIONALS) -> RowReduction:
    """Rank, a null-space basis and a column-space basis of ``m``."""
    order = {j: j for j in range(m.ncols)}
    e = Echelon(key=order.__getitem__)
    for r in m.rows:
        e.add(r)
    rank = len(e)
    kernel = []
    for f in range(m.ncols):
        if f in e.rows:
            continue
        vec = [field.zero] * m.ncols
        vec[f] = field.one
        for p, row in e.rows.items():
            if f in row:
                vec[p] = -row[f]
        kernel.append(vec)
    cols = m.columns()
    image = []
    for p in sorted(e.rows):
        col = [field.zero] * m.nrows
        for i, v in cols[p].items():
            col[i] = v
        image.append(col)
    return RowReduction(rank, kernel, image)


def solve(m: Matrix, rhs, field: Field = RATIONALS) -> Optional[List]:
    """Some ``x`` with ``m x = rhs``, or None when the system is inconsistent."""
    rhs = list(rhs)
    if len(rhs) != m.nrows:
        raise ValueError("right-hand side length must equal the row count")
    aug = "rhs"
    order = {j: j for j in range(m.ncols)}
    order[aug] = m.ncols
    e = Echelon(key=order.__getitem__)
    for r, b in zip(m.rows, rhs):
        row = dict(r)
        if b:
            row[aug] = field(b)
        e.add(row)
    if aug in e.rows:
        return None
    x = [field.zero] * m.ncols
    for p, row in e.rows.items():
        x[p] = row.get(aug, field.zero)
    return x


def solve_sparse(m: Matrix, rhs: dict) -> Optional[dict]:
    """Sparse variant of :func:`solve`; ``rhs`` is keyed by row index."""
    aug = -1
    order = {j: j for j in range(m.ncols)}
    order[aug] = m.ncols
    e = Echelon(key=order.__getitem__)
    for i, r in enumerate(m.rows):
        row = dict(r)
        b = rhs.get(i)
        if b:
            row[aug] = b
        e.add(row)
    for i, b in rhs.items():
        if b and not m.rows[i]:
            return None
    if aug in e.rows:
        return None
    return {p: row[aug] for p, row in e.rows.items() if row.get(aug)}


def inverse(m: Matrix, one) -> Matrix:
    if m.nrows != m.ncols:
        raise ValueError("not square")
    n = m.nrows
    cols = []
    for j in range(n):
        x = solve_sparse(m, {j: one})
        if x is None:
            raise ZeroDivisionError("singular matrix")
        cols.append(x)
    return Matrix.from_columns(n, cols)


def matrix_rank(m: Matrix) -> int:
    return rank_of(m.rows)


def charpoly_roots(m: Matrix, field: Field) -> List:
    """Distinct roots in ``field`` of the characteristic polynomial of ``m``."""
    import sympy

    n = m.nrows
    if n == 0:
        return []
    dense = m.to_dense(0)
    if field.p is None:
        sm = sympy.Matrix(n, n, lambda i, j: sympy.Rational(str(dense[i][j])) if dense[i][j] else 0)
        poly = sm.charpoly()
        roots = sympy.Poly(poly.as_expr(), poly.gen).ground_roots()
        return [field(Fraction(int(r.p), int(r.q))) for r in roots]
    sm = sympy.Matrix(n, n, lambda i, j: int(dense[i][j]) if dense[i][j] else 0)
    poly = sympy.Poly(sm.charpoly().as_expr(), sympy.Symbol("lambda"), modulus=field.p)
    _, factors = poly.factor_list()
    out = []
    for f, _ in factors:
        if f.degree() == 1:
            c = f.all_coeffs()
            out.append(field(-int(c[1]) * pow(int(c[0]), field.p - 2, field.p)))
    return out
