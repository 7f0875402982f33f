"""Exact rational linear algebra.

Everything here works over Q.  Rows are turned into integer rows (clearing
denominators does not change a row space) and reduced with fraction-free
Bareiss steps, so intermediate values stay integral and every division is
exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence

Rational = Fraction


class DimensionError(ValueError):
    """Shapes of the operands do not fit together."""


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RatMatrix:
    """Dense immutable matrix with Fraction entries, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Iterable] = None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative shape")
        if entries is None:
            ent = (Fraction(0),) * (rows * cols)
        else:
            ent = tuple(_as_fraction(x) for x in entries)
            if len(ent) != rows * cols:
                raise DimensionError(
                    "expected %d entries, got %d" % (rows * cols, len(ent)))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: Optional[int] = None):
        columns = [list(c) for c in columns]
        if rows is None:
            if not columns:
                raise DimensionError("row count needed for an empty column list")
            rows = len(columns[0])
        for c in columns:
            if len(c) != rows:
                raise DimensionError("ragged columns")
        return cls(rows, len(columns),
                   [columns[j][i] for i in range(rows) for j in range(len(columns))])

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> List[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> List[Fraction]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> List[List[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def to_columns(self) -> List[List[Fraction]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_columns(self.to_rows(), rows=self.cols) if self.rows else \
            RatMatrix(self.cols, 0)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise DimensionError("%dx%d @ %dx%d" % (
                    self.rows, self.cols, other.rows, other.cols))
            ocols = other.to_columns()
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
            return RatMatrix(self.rows, other.cols, out)
        v = list(other)
        if len(v) != self.cols:
            raise DimensionError("vector length %d, expected %d" % (len(v), self.cols))
        return [sum((a * b for a, b in zip(self.row(i), v) if a and b), Fraction(0))
                for i in range(self.rows)]

    def __eq__(self, other):
        return (isinstance(other, RatMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return "RatMatrix(%dx%d: [%s])" % (self.rows, self.cols, body)


# -- integer row kernels -------------------------------------------------

def int_row(row: Sequence) -> List[int]:
    """Scale a rational row to a primitive integer row with the same span."""
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    out = [int(x * den) for x in row] if den != 1 else [int(x) for x in row]
    g = 0
    for x in out:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g > 1:
        out = [x // g for x in out]
    return out


def _bareiss(rows: List[List[int]], ncols: int, full: bool):
    """In-place fraction-free elimination.

    With ``full`` the elimination also clears entries above each pivot
    (fraction-free Gauss-Jordan); all pivots then share one common value.
    Returns (pivot columns, final pivot value).  Pivot choice is the first
    nonzero entry in column order.
    """
    nr = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nr:
            break
        piv = r
        while piv < nr and rows[piv][c] == 0:
            piv += 1
        if piv == nr:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        p = pr[c]
        start = 0 if full else r + 1
        for i in range(start, nr):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                rows[i] = [(p * a - f * b) // prev for a, b in zip(row, pr)]
            elif p != prev:
                rows[i] = [(p * a) // prev for a in row]
        pivots.append(c)
        prev = p
        r += 1
    return pivots, prev


def row_echelon(vectors: Sequence[Sequence], ncols: Optional[int] = None):
    """Integer echelon form of the given rows.

    Returns (nonzero rows, pivot columns).
    """
    rows = [int_row(v) for v in vectors]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots, _ = _bareiss(rows, ncols, full=False)
    return rows[:len(pivots)], pivots


def row_rank(vectors: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    if not vectors:
        return 0
    return len(row_echelon(vectors, ncols)[1])


def rref(vectors: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form over Q (pivots normalised to 1)."""
    rows = [int_row(v) for v in vectors]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots, p = _bareiss(rows, ncols, full=True)
    out = []
    for i, c in enumerate(pivots):
        d = rows[i][c]
        out.append([Fraction(a, d) for a in rows[i]])
    return out, pivots


def null_vectors(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : R x = 0}, one vector per free column.

    The basis is the reduced one: vector j has a 1 in free column j and 0 in
    the other free columns, which makes it independent of row order.
    """
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    pset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            if red[i][f]:
                v[c] = -red[i][f]
        out.append(v)
    return out


def span_basis(vectors: Sequence[Sequence], ncols: Optional[int] = None):
    """Canonical (reduced echelon) basis of the span of the given vectors."""
    if not vectors:
        return []
    red, _ = rref(vectors, ncols)
    return red


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    ra, rb = row_rank(a, ncols), row_rank(b, ncols)
    return ra == rb and row_rank(list(a) + list(b), ncols) == ra


def contains_span(big: Sequence[Sequence], small: Sequence[Sequence], ncols: int) -> bool:
    rb = row_rank(big, ncols)
    return row_rank(list(big) + list(small), ncols) == rb


class EchelonBasis:
    """Incrementally grown echelon basis; tells whether a new vector is new."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows = {}  # pivot column -> primitive integer row

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Sequence) -> List[int]:
        w = int_row(v)
        for c in sorted(self._rows):
            a = w[c]
            if a:
                r = self._rows[c]
                p = r[c]
                w = [p * x - a * y for x, y in zip(w, r)]
        return w

    def add(self, v: Sequence) -> bool:
        w = self.reduce(v)
        for c, x in enumerate(w):
            if x:
                g = 0
                for y in w:
                    if y:
                        g = gcd(g, y)
                w = [y // g for y in w]
                if w[c] < 0:
                    w = [-y for y in w]
                self._rows[c] = w
                return True
        return False

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))


# -- matrix level API --------------------------------------------------

def rank(m: RatMatrix) -> int:
    return row_rank(m.to_rows(), m.cols)


def nullspace(m: RatMatrix) -> RatMatrix:
    """Columns form a basis of the kernel of m."""
    vecs = null_vectors(m.to_rows(), m.cols)
    return RatMatrix.from_columns(vecs, rows=m.cols) if vecs else RatMatrix(m.cols, 0)


def column_space(m: RatMatrix) -> RatMatrix:
    basis = span_basis(m.to_columns(), m.rows)
    return RatMatrix.from_columns(basis, rows=m.rows) if basis else RatMatrix(m.rows, 0)


def solve(m: RatMatrix, b: Sequence) -> Optional[List[Fraction]]:
    """One solution of m x = b, or None when the system is inconsistent."""
    b = list(b)
    if len(b) != m.rows:
        raise DimensionError("right-hand side has %d entries, matrix has %d rows"
                             % (len(b), m.rows))
    aug = [r + [-_as_fraction(x)] for r, x in zip(m.to_rows(), b)]
    if not aug:
        return [Fraction(0)] * m.cols
    red, pivots = rref(aug, m.cols + 1)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for i, c in enumerate(pivots):
        x[c] = -red[i][m.cols]
    return x
