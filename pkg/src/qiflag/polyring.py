"""Polynomials over Q in the simple-root variables x1..xn.

The variable x_j is the simple root alpha_j viewed as a linear form on V, so a
root with simple-root coordinates (c_1..c_n) is the linear polynomial
sum c_j x_j.  W acts by the algebra substitution x_j -> w(alpha_j).

Monomials of a fixed degree are ordered graded-lexicographically (descending
lex within the degree); this order fixes every coefficient vector below.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .ratcore import RatMatrix, null_vectors, span_basis, int_row

Exp = Tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> Tuple[Exp, ...]:
    """Exponent vectors of degree d in n variables, lex descending."""
    if d < 0:
        return ()
    if n == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(n - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> Dict[Exp, int]:
    return {e: i for i, e in enumerate(monomials(n, d))}


def dim_poly(n: int, d: int) -> int:
    return comb(d + n - 1, n - 1) if d >= 0 else 0


class Poly:
    """Immutable polynomial: map from exponent tuple to nonzero Fraction."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Optional[Dict[Exp, object]] = None):
        self.n = n
        t = {}
        if terms:
            for e, c in terms.items():
                if c:
                    if len(e) != n:
                        raise ValueError("exponent %r has wrong length for %d variables" % (e, n))
                    t[tuple(e)] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = t
        self._hash = None

    # constructors ------------------------------------------------------
    @classmethod
    def constant(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, j: int) -> "Poly":
        return cls(n, {tuple(int(i == j) for i in range(n)): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for i in range(n)): c for j, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, e: Exp, c=1) -> "Poly":
        return cls(len(e), {tuple(e): c})

    @classmethod
    def from_vector(cls, n: int, d: int, vec: Sequence) -> "Poly":
        mons = monomials(n, d)
        if len(vec) != len(mons):
            raise ValueError("vector length %d, expected %d" % (len(vec), len(mons)))
        return cls(n, {e: c for e, c in zip(mons, vec) if c})

    # basic queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.n, {e: c for e, c in self.terms.items() if sum(e) == d})

    def degrees(self) -> List[int]:
        return sorted({sum(e) for e in self.terms})

    def coeff(self, e: Exp) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def vector(self, d: int) -> List[Fraction]:
        """Coefficients of the degree-d part in the monomial basis."""
        return [self.terms.get(e, Fraction(0)) for e in monomials(self.n, d)]

    # arithmetic --------------------------------------------------------
    def _check(self, other):
        if other.n != self.n:
            raise ValueError("polynomials in %d and %d variables" % (self.n, other.n))

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(self.n, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        t: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.n, t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return Poly(self.n, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        out = Poly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self == Poly.constant(self.n, other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def derivative(self, j: int) -> "Poly":
        t = {}
        for e, c in self.terms.items():
            if e[j]:
                f = list(e)
                f[j] -= 1
                t[tuple(f)] = c * e[j]
        return Poly(self.n, t)

    def directional(self, xi: Sequence) -> "Poly":
        """Derivative along xi in V; xi given by its values on x1..xn."""
        out = Poly(self.n)
        for j, v in enumerate(xi):
            if v:
                out = out + self.derivative(j) * v
        return out

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace x_j by images[j]."""
        out = Poly(images[0].n if images else self.n)
        cache: Dict[Tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            term = Poly.constant(out.n, c)
            for j, a in enumerate(e):
                if a:
                    key = (j, a)
                    if key not in cache:
                        cache[key] = images[j] ** a
                    term = term * cache[key]
            out = out + term
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        s = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, a in zip(point, e):
                t *= Fraction(x) ** a
            s += t
        return s

    # text ------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-a for a in t[0])))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return "Poly(%s)" % format_poly(self)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(("x%d" % (j + 1)) + ("^%d" % a if a > 1 else "")
                        for j, a in enumerate(e) if a)
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else "%s*%s" % (a, mono)
        else:
            body = str(a)
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_poly(text: str, n: int) -> Poly:
    """Parse '3/2*x1^2*x2 - x3' into a Poly in n variables."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    pos = 0
    terms: Dict[Exp, Fraction] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse polynomial at column %d: %r" % (pos + 1, s))
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise ValueError("missing operator at column %d" % (pos + 1))
        first = False
        coeff = Fraction(-1 if sign == "-" else 1)
        e = [0] * n
        for f in body.split("*"):
            f = f.strip()
            fm = _FACTOR.match(f)
            if fm:
                j = int(fm.group(1)) - 1
                if not 0 <= j < n:
                    raise ValueError("variable x%d out of range 1..%d" % (j + 1, n))
                e[j] += int(fm.group(2) or 1)
            else:
                try:
                    coeff *= Fraction(f)
                except (ValueError, ZeroDivisionError):
                    raise ValueError("bad factor %r in %r" % (f, text)) from None
        terms[tuple(e)] = terms.get(tuple(e), 0) + coeff
        pos = m.end()
    return Poly(n, terms)


# -- linear maps on graded pieces ------------------------------------------

def substitution_matrix(images: Sequence[Poly], d: int) -> List[List[Fraction]]:
    """Matrix (rows = target monomials, cols = source monomials) of the
    substitution x_j -> images[j] restricted to degree d, for linear images."""
    n = len(images)
    mons = monomials(n, d)
    idx = monomial_index(n, d)
    cols = []
    pw: Dict[Tuple[int, int], Poly] = {}
    for e in mons:
        term = Poly.constant(n, 1)
        for j, a in enumerate(e):
            if a:
                if (j, a) not in pw:
                    pw[(j, a)] = images[j] ** a
                term = term * pw[(j, a)]
        col = [Fraction(0)] * len(mons)
        for f, c in term.terms.items():
            col[idx[f]] = c
        cols.append(col)
    return [[cols[j][i] for j in range(len(mons))] for i in range(len(mons))]


def apply_matrix(mat: List[List[Fraction]], vec: Sequence) -> List[Fraction]:
    return [sum((a * b for a, b in zip(row, vec) if a and b), Fraction(0)) for row in mat]


def _images(w) -> List[Poly]:
    m = w.matrix
    n = len(m)
    return [Poly.linear([m[i][j] for i in range(n)]) for j in range(n)]


def act(w, p: Poly) -> Poly:
    """w . p : substitute x_j -> w(alpha_j) (column j of the matrix of w)."""
    if w.rank != p.n:
        raise ValueError("rank mismatch: element of rank %d, polynomial in %d variables"
                         % (w.rank, p.n))
    return p.substitute(_images(w))


@lru_cache(maxsize=None)
def action_matrix(w, d: int) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(r) for r in substitution_matrix(_images(w), d))


def act_vector(w, d: int, vec: Sequence) -> List[Fraction]:
    return apply_matrix(action_matrix(w, d), vec)


# -- division by powers of a linear form ------------------------------------

class _Chart:
    """Coordinates y = C x with y_1 = alpha; caches the substitutions."""

    def __init__(self, alpha: Tuple[Fraction, ...]):
        n = len(alpha)
        piv = next(j for j, a in enumerate(alpha) if a)
        rows = [list(alpha)] + [[Fraction(int(i == j)) for i in range(n)]
                                for j in range(n) if j != piv]
        self.n = n
        self.C = rows
        # inverse of C by solving column by column
        from .ratcore import RatMatrix, solve
        cm = RatMatrix.from_rows(rows)
        inv_cols = [solve(cm, [int(i == j) for i in range(n)]) for j in range(n)]
        self.Cinv = [[inv_cols[j][i] for j in range(n)] for i in range(n)]
        # x_i = sum_j Cinv[i][j] y_j ;  y_k = sum_i C[k][i] x_i
        self.x_in_y = [Poly.linear(self.Cinv[i]) for i in range(n)]
        self.y_in_x = [Poly.linear(self.C[k]) for k in range(n)]
        self._to_y = {}
        self._rem_rows = {}

    def to_y(self, d: int):
        if d not in self._to_y:
            self._to_y[d] = substitution_matrix(self.x_in_y, d)
        return self._to_y[d]

    def remainder_rows(self, d: int, m: int) -> List[List[Fraction]]:
        """Rows of the linear map p -> (coefficients of y-monomials with y1-degree < m)."""
        key = (d, m)
        if key not in self._rem_rows:
            mat = self.to_y(d)
            mons = monomials(self.n, d)
            self._rem_rows[key] = [mat[i] for i, e in enumerate(mons) if e[0] < m]
        return self._rem_rows[key]


_CHARTS: Dict[Tuple[Fraction, ...], _Chart] = {}


def chart(alpha: Sequence) -> _Chart:
    key = tuple(Fraction(a) for a in alpha)
    if not any(key):
        raise ValueError("cannot divide by the zero linear form")
    ch = _CHARTS.get(key)
    if ch is None:
        ch = _CHARTS[key] = _Chart(key)
    return ch


def _linear_coeffs(alpha) -> Tuple[Fraction, ...]:
    if isinstance(alpha, Poly):
        if not alpha.terms or alpha.degree() != 1 or not alpha.is_homogeneous():
            raise ValueError("expected a nonzero linear form")
        return tuple(alpha.coeff(tuple(int(i == j) for i in range(alpha.n)))
                     for j in range(alpha.n))
    return tuple(Fraction(a) for a in alpha)


def divide_by_linear_power(p: Poly, alpha, m: int) -> Tuple[Poly, Poly]:
    """p = alpha^m * quotient + remainder, remainder of alpha-adic valuation < m.

    alpha is a linear form (Poly or coefficient sequence).  The remainder is
    measured in coordinates where alpha is the first variable.
    """
    a = _linear_coeffs(alpha)
    ch = chart(a)
    if p.n != ch.n:
        raise ValueError("rank mismatch")
    if m <= 0:
        return p, Poly(p.n)
    py = p.substitute(ch.x_in_y)
    q, r = {}, {}
    for e, c in py.terms.items():
        if e[0] >= m:
            q[(e[0] - m,) + e[1:]] = c
        else:
            r[e] = c
    return Poly(p.n, q).substitute(ch.y_in_x), Poly(p.n, r).substitute(ch.y_in_x)


def divisible_by_linear_power(p: Poly, alpha, m: int) -> bool:
    if m <= 0 or p.is_zero():
        return True
    ch = chart(_linear_coeffs(alpha))
    for d in p.degrees():
        vec = p.vector(d)
        for row in ch.remainder_rows(d, m):
            if sum((a * b for a, b in zip(row, vec) if a and b), Fraction(0)):
                return False
    return True


def exact_divide(p: Poly, alpha, m: int = 1) -> Poly:
    q, r = divide_by_linear_power(p, alpha, m)
    if r:
        raise ArithmeticError("%s is not divisible by (%s)^%d" % (p, Poly.linear(_linear_coeffs(alpha)), m))
    return q


def root_poly(alpha: Sequence) -> Poly:
    return Poly.linear(list(alpha))


# -- invariants --------------------------------------------------------------

def reynolds(rs, p: Poly) -> Poly:
    out = Poly(p.n)
    for w in rs.group:
        out = out + act(w, p)
    return out / rs.order


def reynolds_matrix(rs, d: int) -> List[List[Fraction]]:
    n = rs.rank
    N = dim_poly(n, d)
    tot = [[Fraction(0)] * N for _ in range(N)]
    for w in rs.group:
        a = action_matrix(w, d)
        for i in range(N):
            ri, ai = tot[i], a[i]
            for j in range(N):
                if ai[j]:
                    ri[j] += ai[j]
    g = rs.order
    return [[x / g for x in r] for r in tot]


def invariant_vectors(rs, d: int) -> List[List[Fraction]]:
    """Canonical basis (coefficient vectors) of k[V]^W in degree d."""
    mat = reynolds_matrix(rs, d)
    cols = [[mat[i][j] for i in range(len(mat))] for j in range(len(mat))]
    return span_basis(cols, len(mat))


def invariant_basis(rs, d: int) -> RatMatrix:
    vecs = invariant_vectors(rs, d)
    N = dim_poly(rs.rank, d)
    return RatMatrix.from_columns(vecs, rows=N) if vecs else RatMatrix(N, 0)


class GradedSubspace:
    """degree -> matrix whose columns are coefficient vectors of a basis.

    ``block`` is the length of one polynomial coefficient block; tuples of
    polynomials (splines) are stored as concatenated blocks, one per vertex.
    """

    def __init__(self, n: int, blocks: int = 1):
        self.n = n
        self.blocks = blocks
        self.per_degree: Dict[int, List[List[Fraction]]] = {}

    def set(self, d: int, vectors: List[List[Fraction]]):
        self.per_degree[d] = vectors

    def __getitem__(self, d: int) -> List[List[Fraction]]:
        return self.per_degree[d]

    def __contains__(self, d):
        return d in self.per_degree

    def matrix(self, d: int) -> RatMatrix:
        vecs = self.per_degree[d]
        rows = dim_poly(self.n, d) * self.blocks
        return RatMatrix.from_columns(vecs, rows=rows) if vecs else RatMatrix(rows, 0)

    def dims(self) -> Dict[int, int]:
        return {d: len(v) for d, v in sorted(self.per_degree.items())}

    def polys(self, d: int) -> List:
        out = []
        N = dim_poly(self.n, d)
        for v in self.per_degree[d]:
            if self.blocks == 1:
                out.append(Poly.from_vector(self.n, d, v))
            else:
                out.append(tuple(Poly.from_vector(self.n, d, v[b * N:(b + 1) * N])
                                 for b in range(self.blocks)))
        return out


def hilbert_poly_ring(n: int, D: int) -> List[int]:
    return [dim_poly(n, d) for d in range(D + 1)]


def series_div(num: Sequence, den: Sequence, D: int) -> List[Fraction]:
    """Termwise power-series quotient num/den up to t^D (den[0] != 0)."""
    out = []
    for d in range(D + 1):
        s = Fraction(num[d]) if d < len(num) else Fraction(0)
        for j in range(1, min(d, len(den) - 1) + 1):
            s -= den[j] * out[d - j]
        out.append(s / den[0])
    return out


def series_mul(a: Sequence, b: Sequence, D: int) -> List[int]:
    return [sum(a[i] * b[d - i] for i in range(d + 1) if i < len(a) and d - i < len(b))
            for d in range(D + 1)]
