"""Laurent (character-ring) versions: divided differences, exponential
quasi-invariants, the spline rings Q_m and Q'_m, Hecke and trigonometric
Dunkl actions, all checked inside finite filtration boxes F_N.

Exponents are integer vectors in lattice coordinates (weight coordinates for
the weight lattice, root coordinates for the root lattice).  Division by
(1 - e^b) splits a Laurent element into cosets of Z b; on each coset it is a
one-variable Laurent polynomial in z = e^b and division is a running sum.
Linear-algebra routes instead express divisibility by (1-z)^a (1+z)^c as
moment conditions sum_j c_j j^i = 0 and sum_j (-1)^j c_j j^i = 0.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from math import floor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coxeter import Direction, RootSystem, as_mult, basis_directions, halve_root
from .ratcore import EchelonBasis, null_vectors, row_rank, same_span, span_basis

Exp = Tuple[int, ...]


class Laurent:
    """Finite sum of c * e^lambda."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[Exp, object]] = None):
        self.n = n
        t = {}
        if terms:
            for e, c in terms.items():
                if c:
                    t[tuple(e)] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = t

    @classmethod
    def mono(cls, e: Sequence[int], c=1) -> "Laurent":
        return cls(len(e), {tuple(e): c})

    @classmethod
    def const(cls, n: int, c=1) -> "Laurent":
        return cls(n, {(0,) * n: c})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _coerce(self, o):
        if isinstance(o, Laurent):
            if o.n != self.n:
                raise ValueError("lattice rank mismatch")
            return o
        return Laurent.const(self.n, o)

    def __add__(self, o):
        o = self._coerce(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return Laurent(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, Laurent):
            c = Fraction(o)
            return Laurent(self.n, {e: v * c for e, v in self.terms.items()})
        t: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Laurent(self.n, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Laurent.const(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, Laurent):
            o = Laurent.const(self.n, o)
        return self.n == o.n and self.terms == o.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def act(self, mat) -> "Laurent":
        """e^lambda -> e^{M lambda} for an integer matrix on lattice coordinates."""
        n = self.n
        t: Dict[Exp, Fraction] = {}
        for e, c in self.terms.items():
            f = tuple(sum(mat[i][j] * e[j] for j in range(n)) for i in range(n))
            t[f] = t.get(f, 0) + c
        return Laurent(n, t)

    def max_abs(self) -> int:
        return max((max(abs(x) for x in e) for e in self.terms), default=0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: tuple(-x for x in t[0]))

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return "Laurent(%s)" % format_laurent(self)


def format_laurent(f: Laurent) -> str:
    if not f.terms:
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        mono = "e[%s]" % ",".join(str(x) for x in e)
        neg = c < 0
        a = -c if neg else c
        body = mono if a == 1 else "%s*%s" % (a, mono)
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


_LTERM = re.compile(r"\s*([+-])?\s*(?:([0-9/]+)\s*\*\s*)?e\[([^\]]*)\]")
_LCONST = re.compile(r"\s*([+-])?\s*([0-9/]+)(?![0-9/]*\s*\*)")


def parse_laurent(text: str, n: int) -> Laurent:
    """Parse '2*e[1,-1] - e[0,0]'. A bare number c means c*e[0,..,0]."""
    s = text.strip()
    pos = 0
    terms: Dict[Exp, Fraction] = {}
    first = True
    while pos < len(s):
        m = _LTERM.match(s, pos)
        if m:
            sign, coef, exps = m.group(1), m.group(2), m.group(3)
            e = tuple(int(x) for x in exps.split(",")) if exps.strip() else ()
            if len(e) != n:
                raise ValueError("exponent %r does not have %d entries" % (e, n))
        else:
            m = _LCONST.match(s, pos)
            if not m:
                raise ValueError("cannot parse Laurent element at column %d: %r" % (pos + 1, s))
            sign, coef, e = m.group(1), m.group(2), (0,) * n
        if sign is None and not first:
            raise ValueError("missing operator at column %d" % (pos + 1))
        first = False
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        terms[e] = terms.get(e, 0) + c
        pos = m.end()
    return Laurent(n, terms)


# -- coset division ---------------------------------------------------------------

def _coset_split(f: Laurent, beta: Exp):
    """Group exponents into cosets lambda + Z beta.  Returns base -> {j: c}."""
    i0 = next(i for i, b in enumerate(beta) if b)
    out: Dict[Exp, Dict[int, Fraction]] = {}
    for e, c in f.terms.items():
        j = floor(Fraction(e[i0], beta[i0]))
        base = tuple(x - j * b for x, b in zip(e, beta))
        out.setdefault(base, {})[j] = c
    return out


def _div_one(coeffs: Dict[int, Fraction], sign: int) -> Optional[Dict[int, Fraction]]:
    """Divide sum c_j z^j by (1 - sign z); None if not exact."""
    if not coeffs:
        return {}
    lo, hi = min(coeffs), max(coeffs)
    q = {}
    run = Fraction(0)
    for j in range(lo, hi + 1):
        run = coeffs.get(j, 0) + (sign * run)
        if j < hi:
            if run:
                q[j] = run
        elif run:
            return None
    return q


def divide(f: Laurent, beta: Sequence[int], minus: int = 1, plus: int = 0) -> Optional[Laurent]:
    """f / ((1 - e^beta)^minus (1 + e^beta)^plus), or None if not exact."""
    beta = tuple(beta)
    if not any(beta):
        raise ValueError("zero exponent")
    if f.is_zero():
        return f
    cosets = _coset_split(f, beta)
    terms: Dict[Exp, Fraction] = {}
    for base, co in cosets.items():
        cur = co
        for _ in range(minus):
            cur = _div_one(cur, 1)
            if cur is None:
                return None
        for _ in range(plus):
            cur = _div_one(cur, -1)
            if cur is None:
                return None
        for j, c in cur.items():
            terms[tuple(x + j * b for x, b in zip(base, beta))] = c
    return Laurent(f.n, terms)


def divides(f: Laurent, beta, minus=1, plus=0) -> bool:
    return divide(f, beta, minus, plus) is not None


def moment_rows(support_rows: Dict[Exp, Dict[int, Fraction]], beta: Exp, minus: int,
                plus: int, nvars: int) -> List[List[Fraction]]:
    """Linear conditions for (1-z)^minus (1+z)^plus | g, z = e^beta, where
    g = sum_e (row_e . x) e^e is linear in unknowns x (rows sparse dicts)."""
    i0 = next(i for i, b in enumerate(beta) if b)
    cos: Dict[Exp, List[Tuple[int, Dict[int, Fraction]]]] = {}
    for e, row in support_rows.items():
        j = floor(Fraction(e[i0], beta[i0]))
        base = tuple(x - j * b for x, b in zip(e, beta))
        cos.setdefault(base, []).append((j, row))
    out = []
    for base in sorted(cos):
        items = cos[base]
        for sgn, count in ((1, minus), (-1, plus)):
            for i in range(count):
                r = [Fraction(0)] * nvars
                for j, row in items:
                    w = Fraction(j) ** i * (sgn ** (j % 2) if sgn == -1 else 1)
                    if w:
                        for v, c in row.items():
                            r[v] += w * c
                if any(r):
                    out.append(r)
    return out


# -- the setting attached to a root system ------------------------------------------

class ExpSetting:
    """Lattice data of rs: W on exponents, roots and halved roots as exponents."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.n = rs.rank
        self.mats = [rs.lattice_matrix(w) for w in rs.group]
        self.alpha = [rs.to_lattice(a) for a in rs.positive_roots]
        self.alpha_bar = [rs.to_lattice(halve_root(rs, a)) for a in rs.positive_roots]
        self.halved = [ab != al for ab, al in zip(self.alpha_bar, self.alpha)]
        self.refl = [rs.index(s) for s in rs.reflections]
        self.partner = [[rs.index(s * w) for w in rs.group] for s in rs.reflections]

    def s(self, a: int, f: Laurent) -> Laurent:
        return f.act(self.mats[self.refl[a]])

    def w(self, i: int, f: Laurent) -> Laurent:
        return f.act(self.mats[i])

    def ideal(self, a: int, kind: str, m: int) -> Tuple[int, int]:
        """(minus, plus) exponents over z = e^{abar} for the named generator.

        'bar'   : (1 - e^abar)^m
        'prime' : (1 - e^a)(1 - e^abar)^{m-1}
        """
        if m <= 0:
            return 0, 0
        if kind == "bar":
            return m, 0
        if kind == "prime":
            return (m, 1) if self.halved[a] else (m, 0)
        raise ValueError(kind)

    def in_ideal(self, g: Laurent, a: int, kind: str, m: int) -> bool:
        mi, pl = self.ideal(a, kind, m)
        if mi == 0 and pl == 0:
            return True
        return divides(g, self.alpha_bar[a], mi, pl)

    def pair(self, lam: Exp, xi: Direction) -> Fraction:
        """lambda(xi) for a lattice-coordinate exponent."""
        return xi.pair(self.rs.from_lattice(lam))


_SETTINGS: Dict[int, ExpSetting] = {}


def setting(rs: RootSystem) -> ExpSetting:
    st = _SETTINGS.get(id(rs))
    if st is None or st.rs is not rs:
        st = _SETTINGS[id(rs)] = ExpSetting(rs)
    return st


def box(n: int, N: int) -> List[Exp]:
    """Exponents of F_N (max-abs <= N) in lex order."""
    return [tuple(e) for e in itertools.product(range(-N, N + 1), repeat=n)]


# -- operators -------------------------------------------------------------------------

class NotDivisible(ArithmeticError):
    def __init__(self, msg, vertex=None):
        super().__init__(msg)
        self.vertex = vertex


def lambda_op(rs: RootSystem, a: int, f: Laurent) -> Laurent:
    """(f - s_a f) / (1 - e^a)."""
    st = setting(rs)
    q = divide(f - st.s(a, f), st.alpha[a])
    if q is None:
        raise AssertionError("f - s_a f not divisible by 1 - e^a: lattice/action bug")
    return q


def hecke_delta(rs: RootSystem, a: int, f: Laurent) -> Laurent:
    return f - lambda_op(rs, a, f)


def exp_qinv_membership(rs: RootSystem, f: Laurent, k) -> bool:
    k = as_mult(rs, k)
    st = setting(rs)
    for a in range(len(rs.positive_roots)):
        ka = k(a)
        if ka and not divides(lambda_op(rs, a, f), st.alpha_bar[a], 2 * ka):
            return False
    return True


def exp_qcov_membership(rs: RootSystem, u: Sequence[Laurent], m, variant: str = "Q") -> bool:
    kind = {"Q": "bar", "Q'": "prime", "Qp": "prime"}[variant]
    m = as_mult(rs, m)
    st = setting(rs)
    edge_ok = True
    for a in range(len(rs.positive_roots)):
        for i in range(rs.order):
            j = st.partner[a][i]
            if i < j and not st.in_ideal(u[i] - u[j], a, kind, m(a)):
                edge_ok = False
    # (1 (x) (1 - s_a)) u has w-entry u_w - u_{s_a w}; every entry in the ideal
    idem_ok = all(st.in_ideal(u[i] - u[st.partner[a][i]], a, kind, m(a))
                  for a in range(len(rs.positive_roots)) for i in range(rs.order))
    if edge_ok != idem_ok:
        raise AssertionError("edge and idempotent formulations disagree")
    return edge_ok


def hecke_demazure(rs: RootSystem, a: int, u: Sequence[Laurent]) -> Tuple[Laurent, ...]:
    """w-entry (u_w - s_a u_{s_a w}) / (1 - e^a)."""
    st = setting(rs)
    out = []
    for i in range(len(u)):
        num = u[i] - st.s(a, u[st.partner[a][i]])
        q = divide(num, st.alpha[a])
        if q is None:
            raise NotDivisible("entry %d not divisible by 1 - e^a" % i, i)
        out.append(q)
    return tuple(out)


def hecke_delta_spline(rs, a, u):
    lam = hecke_demazure(rs, a, u)
    return tuple(x - y for x, y in zip(u, lam))


def trig_dunkl(rs: RootSystem, xi: Direction, k, u: Sequence[Laurent]) -> Tuple[Laurent, ...]:
    """w-entry d_xi u_w + 1/2 sum_a k_a abar(xi) (1+e^abar)/(1-e^abar) (u_w - s_a u_{s_a w})."""
    k = as_mult(rs, k)
    st = setting(rs)
    out = []
    for i in range(len(u)):
        f = u[i]
        acc = Laurent(st.n, {e: c * st.pair(e, xi) for e, c in f.terms.items()})
        for a in range(len(rs.positive_roots)):
            ka = k(a)
            if not ka:
                continue
            c = st.pair(st.alpha_bar[a], xi)
            if not c:
                continue
            num = f - st.s(a, u[st.partner[a][i]])
            q = divide(num, st.alpha_bar[a])
            if q is None:
                raise NotDivisible("entry %d not divisible by 1 - e^abar" % i, i)
            acc = acc + (q + q * Laurent.mono(st.alpha_bar[a])) * (Fraction(ka) * c / 2)
        out.append(acc)
    return tuple(out)


# -- slices ------------------------------------------------------------------------------

class Slice:
    """Coordinates for tuples of Laurent elements with prescribed supports."""

    def __init__(self, supports: List[List[Exp]]):
        self.supports = supports
        self.offsets = []
        off = 0
        self.index = []
        for s in supports:
            self.offsets.append(off)
            self.index.append({e: off + t for t, e in enumerate(s)})
            off += len(s)
        self.size = off

    def element(self, vec) -> Tuple[Laurent, ...]:
        out = []
        for b, s in enumerate(self.supports):
            o = self.offsets[b]
            n = len(s[0]) if s else 0
            out.append(Laurent(n, {e: vec[o + t] for t, e in enumerate(s) if vec[o + t]}))
        return tuple(out)

    def vector(self, u: Sequence[Laurent]) -> Optional[List[Fraction]]:
        v = [Fraction(0)] * self.size
        for b, f in enumerate(u):
            idx = self.index[b]
            for e, c in f.terms.items():
                if e not in idx:
                    return None
                v[idx[e]] = c
        return v


def _restrict(basis: List[List[Fraction]], rows: List[List[Fraction]]) -> List[List[Fraction]]:
    """Basis of {x in span(basis) : rows x = 0}."""
    if not rows or not basis:
        return basis
    proj = [[sum((r[i] * b[i] for i in range(len(r)) if r[i] and b[i]), Fraction(0))
             for b in basis] for r in rows]
    sol = null_vectors(proj, len(basis))
    size = len(basis[0])
    out = []
    for c in sol:
        out.append([sum((c[t] * basis[t][i] for t in range(len(basis)) if c[t]), Fraction(0))
                    for i in range(size)])
    return span_basis(out, size) if out else []


def _identity_basis(size: int):
    return [[Fraction(int(i == j)) for i in range(size)] for j in range(size)]


def _edge_rows(rs, sl: Slice, a: int, i: int, j: int, kind: str, m: int):
    st = setting(rs)
    mi, pl = st.ideal(a, kind, m)
    if mi == 0 and pl == 0:
        return []
    g: Dict[Exp, Dict[int, Fraction]] = {}
    for e, v in sl.index[i].items():
        g.setdefault(e, {})[v] = Fraction(1)
    for e, v in sl.index[j].items():
        row = g.setdefault(e, {})
        row[v] = row.get(v, 0) - 1
    return moment_rows(g, st.alpha_bar[a], mi, pl, sl.size)


def spline_slice_basis(rs: RootSystem, m, kind: str, sl: Slice):
    """Basis of the splines (Q for kind 'bar', Q' for 'prime') inside a slice."""
    m = as_mult(rs, m)
    st = setting(rs)
    basis = _identity_basis(sl.size)
    for a in range(len(rs.positive_roots)):
        for i in range(rs.order):
            j = st.partner[a][i]
            if i < j:
                basis = _restrict(basis, _edge_rows(rs, sl, a, i, j, kind, m(a)))
    return basis


def box_slice(rs: RootSystem, N: int) -> Slice:
    b = box(rs.rank, N)
    return Slice([b for _ in rs.group])


def exp_qinv_slice_basis(rs: RootSystem, k, N: int,
                         roots: Optional[Iterable[int]] = None) -> Tuple[List[Exp], List[List[Fraction]]]:
    """Basis of Q_k(W) inside F_N, via moment conditions on f - s_a f.
    With roots given, only those reflections are imposed (Q_k(W_a) for one root)."""
    k = as_mult(rs, k)
    st = setting(rs)
    exps = box(rs.rank, N)
    idx = {e: t for t, e in enumerate(exps)}
    basis = _identity_basis(len(exps))
    for a in (range(len(rs.positive_roots)) if roots is None else roots):
        ka = k(a)
        if not ka:
            continue
        # f - s f must be divisible by (1 - e^a)(1 - e^abar)^{2k}
        mi, pl = st.ideal(a, "prime", 2 * ka + 1)
        g: Dict[Exp, Dict[int, Fraction]] = {}
        mat = st.mats[st.refl[a]]
        for e, t in idx.items():
            g.setdefault(e, {})[t] = g.get(e, {}).get(t, 0) + 1
            se = tuple(sum(mat[r][c] * e[c] for c in range(st.n)) for r in range(st.n))
            row = g.setdefault(se, {})
            row[t] = row.get(t, 0) - 1
        basis = _restrict(basis, moment_rows(g, st.alpha_bar[a], mi, pl, len(exps)))
    return exps, basis


def _vec_to_laurent(exps, v) -> Laurent:
    n = len(exps[0])
    return Laurent(n, {e: c for e, c in zip(exps, v) if c})


# -- slice checks ----------------------------------------------------------------------------

def _congruence_spaces(rs, a, m, N):
    """Subspaces of F_N cut out by the three congruence conditions at root a."""
    st = setting(rs)
    exps = box(rs.rank, N)
    idx = {e: t for t, e in enumerate(exps)}
    mat = st.mats[st.refl[a]]
    diff: Dict[Exp, Dict[int, Fraction]] = {}
    for e, t in idx.items():
        row = diff.setdefault(e, {})
        row[t] = row.get(t, 0) + 1
        se = tuple(sum(mat[r][c] * e[c] for c in range(st.n)) for r in range(st.n))
        row = diff.setdefault(se, {})
        row[t] = row.get(t, 0) - 1
    I = _identity_basis(len(exps))
    mi, pl = st.ideal(a, "prime", m)
    s1 = _restrict(I, moment_rows(diff, st.alpha_bar[a], mi, pl, len(exps)))
    mi, pl = st.ideal(a, "bar", m)
    s2 = _restrict(I, moment_rows(diff, st.alpha_bar[a], mi, pl, len(exps)))
    # condition 3 through the actual divided difference of each monomial
    lam: Dict[Exp, Dict[int, Fraction]] = {}
    for e, t in idx.items():
        for f, c in lambda_op(rs, a, Laurent.mono(e)).terms.items():
            row = lam.setdefault(f, {})
            row[t] = row.get(t, 0) + c
    e3 = 2 * (m // 2)
    s3 = _restrict(I, moment_rows(lam, st.alpha_bar[a], e3, 0, len(exps)))
    return exps, s1, s2, s3


def _cond_values(rs, a, m, f: Laurent):
    st = setting(rs)
    g = f - st.s(a, f)
    c1 = st.in_ideal(g, a, "prime", m)
    c2 = st.in_ideal(g, a, "bar", m)
    e3 = 2 * (m // 2)
    c3 = e3 == 0 or divides(lambda_op(rs, a, f), st.alpha_bar[a], e3)
    return c1, c2, c3


def exp_diag_invariants_check(rs: RootSystem, m, N: int) -> dict:
    m = as_mult(rs, m)
    k = m.map(lambda v: v // 2)
    st = setting(rs)
    exps = box(rs.rank, N)
    size = len(exps)
    problems = []
    per_root = []
    for a in range(len(rs.positive_roots)):
        _, s1, s2, s3 = _congruence_spaces(rs, a, m(a), N)
        eq = same_span(s1, s2, size) and same_span(s2, s3, size)
        # elementwise agreement on the monomials and on a spanning set of s1
        samples = [Laurent.mono(e) for e in exps] + [_vec_to_laurent(exps, v) for v in s1]
        agree = True
        for f in samples:
            vals = _cond_values(rs, a, m(a), f)
            if len(set(vals)) != 1:
                agree = False
                problems.append({"root": a, "element": str(f), "conditions": list(vals)})
                break
        span_ok = all(all(_cond_values(rs, a, m(a), _vec_to_laurent(exps, v))) for v in s1)
        per_root.append({"root": a, "dims": [len(s1), len(s2), len(s3)], "equal": eq,
                         "elementwise": agree and span_ok})
        if not eq:
            problems.append({"root": a, "dims": [len(s1), len(s2), len(s3)]})
    # diagonal invariants: an invariant tuple is (w f)_w with f its identity entry;
    # impose the spline conditions of Q_m and Q'_m on all edges
    inv = {}
    for kind in ("bar", "prime"):
        basis = _identity_basis(size)
        idx = {e: t for t, e in enumerate(exps)}
        for a in range(len(rs.positive_roots)):
            mi, pl = st.ideal(a, kind, m(a))
            if mi == 0 and pl == 0:
                continue
            for i in range(rs.order):
                j = st.partner[a][i]
                if i >= j:
                    continue
                g: Dict[Exp, Dict[int, Fraction]] = {}
                for e, t in idx.items():
                    for w_i, sgn in ((i, 1), (j, -1)):
                        f = Laurent.mono(e).act(st.mats[w_i])
                        (fe,) = f.terms
                        row = g.setdefault(fe, {})
                        row[t] = row.get(t, 0) + sgn
                basis = _restrict(basis, moment_rows(g, st.alpha_bar[a], mi, pl, size))
        inv[kind] = basis
    _, qk = exp_qinv_slice_basis(rs, k, N)
    inv_eq = same_span(inv["bar"], inv["prime"], size) and same_span(inv["bar"], qk, size)
    # re-verify the embedded basis by division
    emb_ok = True
    for v in qk:
        f = _vec_to_laurent(exps, v)
        u = tuple(st.w(i, f) for i in range(rs.order))
        if not (exp_qcov_membership(rs, u, m, "Q") and exp_qcov_membership(rs, u, m, "Q'")):
            emb_ok = False
            problems.append({"twistedEmbeddingFails": str(f)})
            break
    ok = not problems and inv_eq and emb_ok
    rep = {"status": "pass" if ok else "fail", "m": list(m.values), "k": list(k.values),
           "box": N, "congruences": per_root,
           "invariantDims": {"Q": len(inv["bar"]), "Q'": len(inv["prime"]), "Qk": len(qk)}}
    if not ok:
        rep["witness"] = problems[0] if problems else {"invariantDims": rep["invariantDims"]}
    return rep


def exp_borel_map(rs: RootSystem, f: Laurent, g: Laurent, k) -> Tuple[Laurent, ...]:
    if not exp_qinv_membership(rs, g, k):
        raise ValueError("%s is not an exponential quasi-invariant" % g)
    st = setting(rs)
    return tuple(f * st.w(i, g) for i in range(rs.order))


def exp_borel_iso_check(rs: RootSystem, k, N: int, N_small: int, mult_box: int = 1) -> dict:
    """Images of (monomial in F_mult_box) x (Q_k in F_N) must land in Q'_{2k+1}
    and their span must contain Q'_{2k+1} restricted to the box F_N_small."""
    k = as_mult(rs, k)
    st = setting(rs)
    odd = k.map(lambda v: 2 * v + 1)
    exps, qk = exp_qinv_slice_basis(rs, k, N)
    gs = [_vec_to_laurent(exps, v) for v in qk]
    images = []
    contained = True
    for e in box(rs.rank, mult_box):
        f = Laurent.mono(e)
        for g in gs:
            u = tuple(f * st.w(i, g) for i in range(rs.order))
            if not exp_qcov_membership(rs, u, odd, "Q'"):
                contained = False
            images.append(u)
    target_slice = box_slice(rs, N_small)
    targets = [target_slice.element(v) for v in spline_slice_basis(rs, odd, "prime", target_slice)]
    # common coordinates
    supp = [sorted({e for u in images + targets for e in u[i].terms}) for i in range(rs.order)]
    sl = Slice(supp)
    ech = EchelonBasis(sl.size)
    for u in images:
        ech.add(sl.vector(u))
    img_rank = len(ech)
    covered = sum(1 for t in targets if ech.contains(sl.vector(t)))
    ok = contained and covered == len(targets)
    rep = {"status": "pass" if ok else "fail", "k": list(k.values), "box": N,
           "targetBox": N_small, "multiplierBox": mult_box,
           "imagesContained": contained, "imageCount": len(images), "imageRank": img_rank,
           "targetDim": len(targets), "targetsCovered": covered}
    if not ok:
        rep["witness"] = {"imagesContained": contained, "targetsCovered": covered,
                          "targetDim": len(targets)}
    return rep


def _strings(u):
    return [str(x) for x in u]


def hecke_stability(rs: RootSystem, k, N: int) -> dict:
    k = as_mult(rs, k)
    odd = k.map(lambda v: 2 * v + 1)
    sl = box_slice(rs, N)
    basis = [sl.element(v) for v in spline_slice_basis(rs, odd, "prime", sl)]
    fail = None
    for j, u in enumerate(basis):
        if not exp_qcov_membership(rs, u, odd, "Q'"):
            fail = {"basisIndex": j, "reason": "basis element fails membership"}
            break
        for a in range(len(rs.positive_roots)):
            try:
                v = hecke_demazure(rs, a, u)
            except NotDivisible as exc:
                fail = {"basisIndex": j, "root": a, "input": _strings(u),
                        "reason": "non-divisible entry %d" % exc.vertex}
                break
            if not exp_qcov_membership(rs, v, odd, "Q'"):
                fail = {"basisIndex": j, "root": a, "input": _strings(u),
                        "output": _strings(v), "reason": "output outside Q'_{2k+1}"}
                break
            d = hecke_delta_spline(rs, a, u)
            if hecke_delta_spline(rs, a, d) != d:
                fail = {"basisIndex": j, "root": a, "reason": "delta not idempotent"}
                break
        if fail:
            break
    rep = {"operator": "hecke-demazure", "params": {"type": rs.label, "lattice": rs.lattice,
                                                    "k": list(k.values), "box": N},
           "spanningSetSize": len(basis), "status": "pass" if fail is None else "fail"}
    if fail:
        rep["witness"] = fail
    return rep


def trig_stability(rs: RootSystem, k, N: int) -> dict:
    k = as_mult(rs, k)
    even = k.map(lambda v: 2 * v)
    sl = box_slice(rs, N)
    basis = [sl.element(v) for v in spline_slice_basis(rs, even, "bar", sl)]
    fail = None
    for j, u in enumerate(basis):
        for x, xi in enumerate(basis_directions(rs.rank)):
            try:
                v = trig_dunkl(rs, xi, k, u)
            except NotDivisible as exc:
                fail = {"basisIndex": j, "direction": x + 1, "input": _strings(u),
                        "reason": "non-divisible entry %d" % exc.vertex}
                break
            if not exp_qcov_membership(rs, v, even, "Q"):
                fail = {"basisIndex": j, "direction": x + 1, "input": _strings(u),
                        "output": _strings(v), "reason": "output outside Q_{2k}"}
                break
        if fail:
            break
    rep = {"operator": "trig-dunkl", "params": {"type": rs.label, "lattice": rs.lattice,
                                                "k": list(k.values), "box": N},
           "spanningSetSize": len(basis), "status": "pass" if fail is None else "fail"}
    if fail:
        rep["witness"] = fail
    return rep


def delta_power(rs: RootSystem, a: int, i: int) -> Laurent:
    """(e^{abar} - 2 + e^{-abar})^i, the i-th power of delta^2."""
    st = setting(rs)
    ab = st.alpha_bar[a]
    d2 = Laurent.mono(ab) - 2 + Laurent.mono(tuple(-x for x in ab))
    return d2 ** i


def rank1_characterization_check(rs: RootSystem, k, N: int) -> dict:
    """On Z[e^{+-abar}] truncated to |j| <= N: divisibility of Lambda_a f by
    (1-e^abar)^{2k} versus membership in span{1, d^2, .., d^{2k-2}} + d^{2k} Z[e^{+-abar}]."""
    k = as_mult(rs, k)
    st = setting(rs)
    out = []
    ok = True
    witness = None
    for a in range(len(rs.positive_roots)):
        ab = st.alpha_bar[a]
        ka = k(a)
        exps = [tuple(j * x for x in ab) for j in range(-N, N + 1)]
        size = len(exps)
        idx = {e: t for t, e in enumerate(exps)}
        # side 1: Lambda-divisibility as moment conditions on the images of monomials
        lam: Dict[Exp, Dict[int, Fraction]] = {}
        for e, t in idx.items():
            for f, c in lambda_op(rs, a, Laurent.mono(e)).terms.items():
                row = lam.setdefault(f, {})
                row[t] = row.get(t, 0) + c
        s1 = _restrict(_identity_basis(size), moment_rows(lam, ab, 2 * ka, 0, size))
        # side 2: explicit generators
        gens = [delta_power(rs, a, i) for i in range(ka) if i <= N]
        top = delta_power(rs, a, ka)
        for j in range(-(N - ka), N - ka + 1):
            gens.append(top * Laurent.mono(tuple(j * x for x in ab)))
        vecs = []
        for g in gens:
            v = [Fraction(0)] * size
            inside = True
            for e, c in g.terms.items():
                if e not in idx:
                    inside = False
                    break
                v[idx[e]] = c
            if inside:
                vecs.append(v)
        eq = same_span(s1, vecs, size) if (s1 or vecs) else True
        direct = all(divides(lambda_op(rs, a, _vec_to_laurent(exps, v)), ab, 2 * ka)
                     if ka else True for v in vecs)
        out.append({"root": a, "dims": [len(s1), row_rank(vecs, size) if vecs else 0],
                    "equal": eq, "generatorsPass": direct})
        if not (eq and direct):
            ok = False
            witness = witness or {"root": a, "dims": out[-1]["dims"]}
    rep = {"status": "pass" if ok else "fail", "k": list(k.values), "box": N, "lattice": rs.lattice,
           "roots": out}
    if witness:
        rep["witness"] = witness
    return rep


def conjecture_experiment(rs: RootSystem, k, N: int, N_small: int) -> dict:
    """Greedy search for |W| generators of Q_{2k} as an R(T)-module inside
    a box.  Reports evidence only."""
    k = as_mult(rs, k)
    even = k.map(lambda v: 2 * v)
    sl = box_slice(rs, N_small)
    T = [sl.element(v) for v in spline_slice_basis(rs, even, "bar", sl)]
    n = rs.rank
    one = tuple(Laurent.const(n) for _ in rs.group)
    pool = [one] + sorted(T, key=lambda u: (max(f.max_abs() for f in u),
                                            sum(len(f.terms) for f in u), _strings(u)))
    mults = [Laurent.mono(e) for e in box(n, N)]
    chosen: List[Tuple[Laurent, ...]] = []
    multiples: List[Tuple[Laurent, ...]] = []

    def coverage(mlist):
        supp = [sorted({e for u in mlist + T for e in u[i].terms}) for i in range(rs.order)]
        cs = Slice(supp)
        ech = EchelonBasis(cs.size)
        for u in mlist:
            ech.add(cs.vector(u))
        r = len(ech)
        return sum(1 for t in T if ech.contains(cs.vector(t))), r

    best_cov = 0
    W = rs.order
    while len(chosen) < W:
        best = None
        for c in pool:
            if c in chosen:
                continue
            trial = multiples + [tuple(mu * f for f in c) for mu in mults]
            cov, _ = coverage(trial)
            if best is None or cov > best[0]:
                best = (cov, c, trial)
            if cov == len(T):
                break
        if best is None or (best[0] <= best_cov and chosen):
            break
        best_cov, c, multiples = best
        chosen.append(c)
        if best_cov == len(T):
            break
    cov, rank = coverage(multiples) if multiples else (0, 0)
    return {"status": "data-only", "type": rs.label, "lattice": rs.lattice,
            "k": list(k.values), "box": N, "targetBox": N_small, "rankExpected": W,
            "candidates": [_strings(c) for c in chosen], "candidateCount": len(chosen),
            "targetDim": len(T), "spannedFraction": "%d/%d" % (cov, len(T)),
            "multiplesCount": len(multiples), "multiplesRank": rank,
            "note": "evidence inside a finite box; no freeness claim"}


def exp_qinv_report(rs: RootSystem, k, N: int) -> dict:
    """Q_k inside F_N two ways: moment conditions on f - s_a f, and moment
    conditions on the divided differences of monomials.  Every basis element
    is re-verified by exact division."""
    k = as_mult(rs, k)
    st = setting(rs)
    exps, basis = exp_qinv_slice_basis(rs, k, N)
    size = len(exps)
    idx = {e: t for t, e in enumerate(exps)}
    other = _identity_basis(size)
    for a in range(len(rs.positive_roots)):
        if not k(a):
            continue
        lam: Dict[Exp, Dict[int, Fraction]] = {}
        for e, t in idx.items():
            for f, c in lambda_op(rs, a, Laurent.mono(e)).terms.items():
                row = lam.setdefault(f, {})
                row[t] = row.get(t, 0) + c
        other = _restrict(other, moment_rows(lam, st.alpha_bar[a], 2 * k(a), 0, size))
    bad = next((v for v in basis if not exp_qinv_membership(rs, _vec_to_laurent(exps, v), k)), None)
    eq = same_span(basis, other, size)
    ok = eq and bad is None
    rep = {"status": "pass" if ok else "fail", "k": list(k.values), "box": N,
           "dim": len(basis), "dimViaDividedDifferences": len(other),
           "k1CokerSlice": k1_coker_slice(rs, k, N)}
    if not ok:
        rep["witness"] = ({"element": str(_vec_to_laurent(exps, bad))} if bad is not None
                          else {"dims": [len(basis), len(other)]})
    return rep


def k1_coker_slice(rs: RootSystem, k, N: int) -> dict:
    """Cokernel of (prod_a Q_{k_a}(W_a)) + R(T) -> R(T)^A restricted to F_N.
    Boundary effects make this evidence only."""
    k = as_mult(rs, k)
    exps = box(rs.rank, N)
    size = len(exps)
    A = len(rs.positive_roots)
    ech = EchelonBasis(size * A)
    for a in range(A):
        _, b = exp_qinv_slice_basis(rs, k, N, roots=[a])
        for v in b:
            col = [Fraction(0)] * (size * A)
            col[a * size:(a + 1) * size] = v
            ech.add(col)
    for t in range(size):
        col = [Fraction(0)] * (size * A)
        for a in range(A):
            col[a * size + t] = Fraction(-1)
        ech.add(col)
    return {"status": "data-only", "box": N, "targetDim": size * A, "imageRank": len(ech),
            "cokernelDim": size * A - len(ech)}
