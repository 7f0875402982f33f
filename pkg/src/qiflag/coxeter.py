"""Root systems of rank <= 2 (and products), Weyl groups, multiplicities.

Roots are stored as integer vectors in simple-root coordinates.  The Cartan
matrix uses a[i][j] = <alpha_j, alpha_i^vee>, so that

    s_i(alpha_j) = alpha_j - a[i][j] * alpha_i,

and for lambda with root coordinates c the pairing <lambda, alpha_i^vee> is
(A c)_i.  Weight-lattice coordinates of lambda are therefore A c.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

_CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "C2": ((2, -2), (-1, 2)),
    "G2": ((2, -3), (-1, 2)),
}

ROOT_LATTICE = "root"
WEIGHT_LATTICE = "weight"

Vec = Tuple[int, ...]


class UnsupportedType(ValueError):
    pass


def parse_type(label: str) -> List[str]:
    """'A1xA1' -> ['A1', 'A1'].  Case-insensitive, 'x' or '×' separates."""
    parts = [p.strip().upper() for p in re.split(r"[x×*]", label.strip(), flags=re.I)]
    if not parts or any(p not in _CARTAN for p in parts):
        raise UnsupportedType("unsupported root system type %r (known: %s, and products "
                              "like A1xA1)" % (label, ", ".join(sorted(_CARTAN))))
    return parts


def _matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
                 for i in range(n))


def _matvec(a, v):
    return tuple(sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a)))


@dataclass(frozen=True)
class WeylElement:
    """Group element acting on V* in simple-root coordinates.

    Equality and hashing use the matrix only; ``word`` is a reduced word in
    simple-reflection indices (0-based) when produced by the group generator.
    """

    matrix: Tuple[Tuple[int, ...], ...]
    word: Tuple[int, ...] = field(default=(), compare=False)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(_matmul(self.matrix, other.matrix), self.word + other.word)

    def apply(self, v: Sequence) -> tuple:
        return _matvec(self.matrix, tuple(v))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def is_identity(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[i][j] == (i == j) for i in range(n) for j in range(n))

    def name(self) -> str:
        return "e" if not self.word else "".join("s%d" % (i + 1) for i in self.word)


@dataclass(frozen=True)
class Direction:
    """A vector xi in V, given by its values alpha_j(xi) on the simple roots."""

    coords: Tuple

    def pair(self, covector: Sequence) -> Fraction:
        """alpha(xi) for alpha in simple-root coordinates."""
        return sum((Fraction(a) * Fraction(x) for a, x in zip(covector, self.coords)),
                   Fraction(0))


def basis_directions(n: int) -> List[Direction]:
    return [Direction(tuple(int(i == j) for i in range(n))) for j in range(n)]


class RootSystem:
    """Cartan data, positive roots, Weyl group and lattice of a type."""

    def __init__(self, label: str, lattice: str = WEIGHT_LATTICE):
        comps = parse_type(label)
        if lattice not in (ROOT_LATTICE, WEIGHT_LATTICE):
            raise ValueError("lattice must be 'root' or 'weight'")
        self.components = comps
        self.label = "x".join(comps)
        self.lattice = lattice
        n = sum(len(_CARTAN[c]) for c in comps)
        self.rank = n
        cart = [[0] * n for _ in range(n)]
        off = 0
        for c in comps:
            a = _CARTAN[c]
            for i in range(len(a)):
                for j in range(len(a)):
                    cart[off + i][off + j] = a[i][j]
            off += len(a)
        self.cartan = tuple(tuple(r) for r in cart)
        self.simple_roots = tuple(tuple(int(i == j) for i in range(n)) for j in range(n))
        self.simple_reflections = [self._simple_reflection(i) for i in range(n)]
        self._group: Optional[List[WeylElement]] = None
        self._index: Dict[tuple, int] = {}
        self._positive: Optional[Tuple[Vec, ...]] = None
        self._reflections = None
        self._orbits = None

    def __repr__(self):
        return "RootSystem(%s, %s lattice)" % (self.label, self.lattice)

    def _simple_reflection(self, i: int) -> WeylElement:
        n = self.rank
        m = [[int(r == c) for c in range(n)] for r in range(n)]
        for j in range(n):
            m[i][j] -= self.cartan[i][j]
        return WeylElement(tuple(tuple(r) for r in m), (i,))

    # group -------------------------------------------------------------
    @property
    def group(self) -> List[WeylElement]:
        if self._group is None:
            self._group = generate_weyl_group(self)
            self._index = {w.matrix: i for i, w in enumerate(self._group)}
        return self._group

    @property
    def order(self) -> int:
        return len(self.group)

    def index(self, w: WeylElement) -> int:
        self.group
        return self._index[w.matrix]

    def canonical(self, w: WeylElement) -> WeylElement:
        """The stored group element (with reduced word) equal to w."""
        return self.group[self.index(w)]

    def inverse(self, w: WeylElement) -> WeylElement:
        w = self.canonical(w)
        m = self.identity
        for i in reversed(w.word):
            m = m * self.simple_reflections[i]
        return self.canonical(m)

    @property
    def identity(self) -> WeylElement:
        return self.group[0]

    # roots -------------------------------------------------------------
    @property
    def positive_roots(self) -> Tuple[Vec, ...]:
        if self._positive is None:
            found = set()
            for w in self.group:
                for a in self.simple_roots:
                    v = w.apply(a)
                    if all(x >= 0 for x in v):
                        found.add(v)
            self._positive = tuple(sorted(found, key=lambda v: (sum(v), tuple(-x for x in v))))
        return self._positive

    @property
    def roots(self) -> Tuple[Vec, ...]:
        return self.positive_roots + tuple(tuple(-x for x in v) for v in self.positive_roots)

    def root_index(self, v: Sequence) -> int:
        """Index of +-v among the positive roots."""
        v = tuple(v)
        pos = self.positive_roots
        if v in pos:
            return pos.index(v)
        neg = tuple(-x for x in v)
        if neg in pos:
            return pos.index(neg)
        raise ValueError("%r is not a root" % (v,))

    @property
    def reflections(self) -> List[WeylElement]:
        """s_beta for each positive root, aligned with positive_roots."""
        if self._reflections is None:
            out = []
            for beta in self.positive_roots:
                out.append(self._reflection_for(beta))
            self._reflections = out
        return self._reflections

    def _reflection_for(self, beta) -> WeylElement:
        for w in self.group:
            for i, a in enumerate(self.simple_roots):
                if w.apply(a) == beta:
                    s = w * self.simple_reflections[i] * self.inverse(w)
                    return self.canonical(s)
        raise ValueError("not a root")

    def reflection(self, beta) -> WeylElement:
        return self.reflections[self.root_index(beta)]

    def coroot_pairing(self, lam: Sequence, beta: Sequence) -> Fraction:
        """<lambda, beta^vee>, read off from s_beta(lambda) = lambda - c beta."""
        s = self.reflection(beta)
        lam = tuple(Fraction(x) for x in lam)
        img = tuple(sum(Fraction(s.matrix[i][j]) * lam[j] for j in range(self.rank))
                    for i in range(self.rank))
        for d, b in zip((x - y for x, y in zip(lam, img)), beta):
            if b:
                return d / b
        raise ValueError("zero root")

    def coroot_values(self, beta) -> Tuple[Fraction, ...]:
        """beta^vee as the vector (alpha_j(beta^vee))_j."""
        return tuple(self.coroot_pairing(a, beta) for a in self.simple_roots)

    @property
    def orbits(self) -> List[Tuple[int, ...]]:
        return root_orbits(self)

    def orbit_of(self, root_idx: int) -> int:
        for o, members in enumerate(self.orbits):
            if root_idx in members:
                return o
        raise ValueError(root_idx)

    # lattice -----------------------------------------------------------
    def in_lattice(self, v: Sequence) -> bool:
        """Membership of a rational root-coordinate vector in the lattice."""
        v = [Fraction(x) for x in v]
        if self.lattice == ROOT_LATTICE:
            return all(x.denominator == 1 for x in v)
        return all(x.denominator == 1 for x in _matvec(self.cartan, v))

    def to_lattice(self, v: Sequence) -> Vec:
        """Lattice coordinates of a lattice vector given in root coordinates."""
        v = [Fraction(x) for x in v]
        u = v if self.lattice == ROOT_LATTICE else list(_matvec(self.cartan, v))
        if any(Fraction(x).denominator != 1 for x in u):
            raise ValueError("%r is not in the %s lattice" % (v, self.lattice))
        return tuple(int(x) for x in u)

    def from_lattice(self, u: Sequence) -> Tuple[Fraction, ...]:
        """Root coordinates (rational) of a lattice-coordinate vector."""
        if self.lattice == ROOT_LATTICE:
            return tuple(Fraction(x) for x in u)
        return tuple(_solve_small(self.cartan, u))

    def lattice_matrix(self, w: WeylElement) -> Tuple[Tuple[int, ...], ...]:
        """Matrix of w acting on lattice coordinates."""
        if self.lattice == ROOT_LATTICE:
            return w.matrix
        n = self.rank
        cols = []
        for j in range(n):
            e = [int(i == j) for i in range(n)]
            cols.append(self.to_lattice(w.apply(self.from_lattice(e))))
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _solve_small(a, b):
    """Solve a x = b exactly for a small invertible integer matrix."""
    from .ratcore import RatMatrix, solve
    x = solve(RatMatrix.from_rows(a), b)
    if x is None:
        raise ValueError("singular")
    return x


def build_root_system(label: str, lattice: str = WEIGHT_LATTICE) -> RootSystem:
    return RootSystem(label, lattice)


def generate_weyl_group(rs: RootSystem) -> List[WeylElement]:
    """Breadth-first closure under left multiplication by simple reflections.

    BFS order makes every stored word reduced; the identity comes first.
    """
    n = rs.rank
    ident = WeylElement(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), ())
    seen = {ident.matrix: ident}
    order = [ident]
    head = 0
    while head < len(order):
        w = order[head]
        head += 1
        for s in rs.simple_reflections:
            v = s * w
            if v.matrix not in seen:
                seen[v.matrix] = v
                order.append(v)
        if len(order) > 10000:
            raise RuntimeError("group does not close; not a finite Weyl group")
    return order


def root_orbits(rs: RootSystem) -> List[Tuple[int, ...]]:
    if rs._orbits is None:
        pos = rs.positive_roots
        seen = set()
        out = []
        for i, a in enumerate(pos):
            if i in seen:
                continue
            members = set()
            for w in rs.group:
                members.add(rs.root_index(w.apply(a)))
            seen |= members
            out.append(tuple(sorted(members)))
        rs._orbits = out
    return rs._orbits


def halve_root(rs: RootSystem, alpha: Sequence) -> Tuple[Fraction, ...]:
    """alpha/2 if it lies in the lattice of rs, otherwise alpha (root coordinates)."""
    half = tuple(Fraction(x, 2) for x in alpha)
    if rs.in_lattice(half):
        return half
    return tuple(Fraction(x) for x in alpha)


class MultiplicityFunction:
    """Nonnegative integers indexed by root orbits (hence W-invariant)."""

    def __init__(self, rs: RootSystem, values):
        orbits = rs.orbits
        if isinstance(values, int):
            values = [values] * len(orbits)
        values = tuple(int(v) for v in values)
        if len(values) != len(orbits):
            raise ValueError("multiplicity needs %d value(s) for %s, got %d"
                             % (len(orbits), rs.label, len(values)))
        if any(v < 0 for v in values):
            raise ValueError("multiplicities must be nonnegative")
        self.rs = rs
        self.values = values

    def __call__(self, root_idx: int) -> int:
        return self.values[self.rs.orbit_of(root_idx)]

    def per_root(self) -> List[int]:
        return [self(i) for i in range(len(self.rs.positive_roots))]

    def map(self, fn) -> "MultiplicityFunction":
        return MultiplicityFunction(self.rs, [fn(v) for v in self.values])

    def __le__(self, other):
        return all(a <= b for a, b in zip(self.values, other.values))

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        return isinstance(other, MultiplicityFunction) and self.values == other.values \
            and self.rs.label == other.rs.label

    def __hash__(self):
        return hash((self.rs.label, self.values))

    def all_even(self) -> bool:
        return all(v % 2 == 0 for v in self.values)

    def all_odd(self) -> bool:
        return all(v % 2 == 1 for v in self.values)

    def __repr__(self):
        return "m%s" % (list(self.values),)


def as_mult(rs: RootSystem, m) -> MultiplicityFunction:
    if isinstance(m, MultiplicityFunction):
        return m
    return MultiplicityFunction(rs, m)
