"""Demazure, Dunkl and t-deformed Dunkl operators on polynomials and splines,
and stability scans on quasi-covariant spaces."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from .coxeter import Direction, RootSystem, as_mult, basis_directions
from .momentgraph import SplineElement
from .polyring import (Poly, act, divide_by_linear_power, monomials, root_poly)
from .quasirings import QuasiCovariantRing, bruhat


class NotDivisible(ArithmeticError):
    """A divided difference left a nonzero remainder."""

    def __init__(self, msg, vertex=None):
        super().__init__(msg)
        self.vertex = vertex


def _root(rs, alpha):
    """Accept a root index or a root vector; return (index, vector)."""
    if isinstance(alpha, int):
        return alpha, rs.positive_roots[alpha]
    return rs.root_index(alpha), tuple(alpha)


def _div(p: Poly, beta, vertex=None) -> Poly:
    q, r = divide_by_linear_power(p, beta, 1)
    if r:
        raise NotDivisible("(%s) is not divisible by %s" % (p, root_poly(beta)), vertex)
    return q


def demazure_poly(rs: RootSystem, alpha, p: Poly) -> Poly:
    """(p - s_a p) / a, exactly."""
    a, beta = _root(rs, alpha)
    d = p - act(rs.reflections[a], p)
    q, r = divide_by_linear_power(d, beta, 1)
    if r:
        raise AssertionError("p - s_a p not divisible by a: action convention broken")
    return q


def _partner(rs, a):
    s = rs.reflections[a]
    return [rs.index(s * w) for w in rs.group]


def demazure_spline(rs: RootSystem, alpha, u: Sequence[Poly]) -> SplineElement:
    """w-component (u_w - s_a u_{s_a w}) / a."""
    a, beta = _root(rs, alpha)
    s = rs.reflections[a]
    part = _partner(rs, a)
    return SplineElement(_div(u[i] - act(s, u[part[i]]), beta, vertex=i)
                         for i in range(len(u)))


def dunkl_poly(rs: RootSystem, xi: Direction, k, f: Poly, t=1) -> Poly:
    """t d_xi f - sum_a k_a a(xi) (f - s_a f)/a."""
    k = as_mult(rs, k)
    out = f.directional(xi.coords) * Fraction(t)
    for a, beta in enumerate(rs.positive_roots):
        ka = k(a)
        if ka == 0:
            continue
        c = xi.pair(beta)
        if c:
            out = out - demazure_poly(rs, a, f) * (ka * c)
    return out


def dunkl_spline(rs: RootSystem, xi: Direction, k, u: Sequence[Poly], t=1) -> SplineElement:
    """w-component t d_xi u_w - sum_a k_a a(xi) (u_w - s_a u_{s_a w}) / a."""
    k = as_mult(rs, k)
    comps = [p.directional(xi.coords) * Fraction(t) for p in u]
    for a, beta in enumerate(rs.positive_roots):
        ka = k(a)
        c = xi.pair(beta)
        if ka == 0 or not c:
            continue
        s = rs.reflections[a]
        part = _partner(rs, a)
        for i in range(len(u)):
            comps[i] = comps[i] - _div(u[i] - act(s, u[part[i]]), beta, vertex=i) * (ka * c)
    return SplineElement(comps)


def _spline_strings(u):
    return [str(p) for p in u]


def _scan(rs, space: QuasiCovariantRing, D: int, op, label: str, target=None):
    """Apply op to every basis spline up to degree D; return first failure."""
    target = target or space
    for d in range(D + 1):
        for j, u in enumerate(space.splines(d)):
            for tag, f in op:
                try:
                    v = f(u)
                except NotDivisible as exc:
                    return {"degree": d, "basisIndex": j, "operator": tag,
                            "input": _spline_strings(u), "reason": "non-polynomial output",
                            "vertex": rs.group[exc.vertex].name()}
                if not target.contains(v):
                    return {"degree": d, "basisIndex": j, "operator": tag,
                            "input": _spline_strings(u), "output": _spline_strings(v),
                            "reason": "output outside %s" % label}
    return None


def _report(operator, params, D, failure, expect_stable=True):
    stable = failure is None
    rep = {"operator": operator, "params": params, "degreesChecked": list(range(D + 1)),
           "stable": stable}
    if expect_stable:
        rep["status"] = "pass" if stable else "fail"
    else:
        rep["status"] = "pass" if not stable else "fail"
    if failure is not None:
        rep["witness"] = failure
    elif not expect_stable:
        rep["witness"] = {"reason": "no counterexample found up to degree %d" % D}
    return rep


def nilhecke_stability(rs: RootSystem, k, D: int) -> dict:
    """Demazure operators preserve Q_{2k+1}."""
    k = as_mult(rs, k)
    space = QuasiCovariantRing(rs, k.map(lambda v: 2 * v + 1))
    ops = [("demazure[%d]" % a, (lambda u, a=a: demazure_spline(rs, a, u)))
           for a in range(len(rs.positive_roots))]
    fail = _scan(rs, space, D, ops, "Q_{2k+1}")
    return _report("nilhecke", {"type": rs.label, "k": list(k.values),
                                "m": list(space.m.values)}, D, fail)


def nilhecke_negative(rs: RootSystem, k, D: int) -> dict:
    """Demazure operators on Q_{2k} should leave the space (k >= 1)."""
    k = as_mult(rs, k)
    space = QuasiCovariantRing(rs, k.map(lambda v: 2 * v))
    ops = [("demazure[%d]" % a, (lambda u, a=a: demazure_spline(rs, a, u)))
           for a in range(len(rs.positive_roots))]
    fail = _scan(rs, space, D, ops, "Q_{2k}")
    return _report("nilhecke-even", {"type": rs.label, "k": list(k.values),
                                     "m": list(space.m.values)}, D, fail, expect_stable=False)


def _dunkl_ops(rs, k, t=1):
    return [("dunkl[xi%d]" % (j + 1), (lambda u, xi=xi: dunkl_spline(rs, xi, k, u, t)))
            for j, xi in enumerate(basis_directions(rs.rank))]


def cherednik_stability(rs: RootSystem, k, D: int) -> dict:
    """Dunkl operators preserve Q_{2k}."""
    k = as_mult(rs, k)
    space = QuasiCovariantRing(rs, k.map(lambda v: 2 * v))
    fail = _scan(rs, space, D, _dunkl_ops(rs, k), "Q_{2k}")
    return _report("cherednik", {"type": rs.label, "k": list(k.values),
                                 "m": list(space.m.values)}, D, fail)


def cherednik_negative(rs: RootSystem, k, D: int) -> dict:
    """Dunkl operators on Q_{2k+1} should leave the space."""
    k = as_mult(rs, k)
    space = QuasiCovariantRing(rs, k.map(lambda v: 2 * v + 1))
    fail = _scan(rs, space, D, _dunkl_ops(rs, k), "Q_{2k+1}")
    return _report("cherednik-odd", {"type": rs.label, "k": list(k.values),
                                     "m": list(space.m.values)}, D, fail, expect_stable=False)


def stability_predicate(rs: RootSystem, t, k, m) -> bool:
    """t m_a = (1 + (-1)^{m_a}) k_a for all a."""
    k, m = as_mult(rs, k), as_mult(rs, m)
    t = Fraction(t)
    return all(t * mv == (1 + (-1) ** mv) * kv for kv, mv in zip(k.values, m.values))


def t_deformed_check(rs: RootSystem, t, k, m, D: int, order=None) -> dict:
    """Compare the stability of T_xi(t) on Q_m up to degree D with stability_predicate.

    ``order`` optionally permutes the scan order (as a function of the degree
    and the basis), which must not change the verdict.
    """
    k, m = as_mult(rs, k), as_mult(rs, m)
    space = QuasiCovariantRing(rs, m)
    if order is not None:
        space = _Reordered(space, order)
    fail = _scan(rs, space, D, _dunkl_ops(rs, k, t), "Q_m")
    predicted = stability_predicate(rs, t, k, m)
    stable = fail is None
    rep = {"operator": "t-deformed-dunkl",
           "params": {"type": rs.label, "t": str(Fraction(t)), "k": list(k.values),
                      "m": list(m.values)},
           "degreesChecked": list(range(D + 1)), "predicted": predicted, "stable": stable,
           "status": "pass" if stable == predicted else "fail"}
    if fail is not None:
        rep["witness"] = fail
    elif not predicted:
        rep["witness"] = {"reason": "no counterexample found up to degree %d" % D}
    return rep


class _Reordered:
    def __init__(self, space, order):
        self._s = space
        self._order = order

    def splines(self, d):
        return self._order(d, self._s.splines(d))

    def contains(self, u):
        return self._s.contains(u)


def dunkl_commutativity(rs: RootSystem, k, D: int) -> dict:
    """[T_xi, T_eta] = 0 on all monomials up to degree D."""
    k = as_mult(rs, k)
    n = rs.rank
    dirs = basis_directions(n)
    if n < 2:
        return {"operator": "dunkl-commutator", "params": {"type": rs.label, "k": list(k.values)},
                "degreesChecked": [], "status": "data-only",
                "note": "rank one: a single direction, nothing to commute"}
    bad = None
    checked = 0
    for d in range(D + 1):
        for e in monomials(n, d):
            f = Poly.monomial(e)
            for i in range(n):
                for j in range(i + 1, n):
                    c = dunkl_poly(rs, dirs[i], k, dunkl_poly(rs, dirs[j], k, f)) - \
                        dunkl_poly(rs, dirs[j], k, dunkl_poly(rs, dirs[i], k, f))
                    checked += 1
                    if c and bad is None:
                        bad = {"monomial": str(f), "directions": [i + 1, j + 1],
                               "commutator": str(c)}
    rep = {"operator": "dunkl-commutator", "params": {"type": rs.label, "k": list(k.values)},
           "degreesChecked": list(range(D + 1)), "pairsChecked": checked,
           "status": "pass" if bad is None else "fail"}
    if bad:
        rep["witness"] = bad
    return rep


def transform_direction(rs: RootSystem, w, xi: Direction) -> Direction:
    """w(xi) for the action on V dual to the action on V*."""
    wi = rs.inverse(w)
    n = rs.rank
    # alpha_j(w xi) = (w^-1 alpha_j)(xi)
    return Direction(tuple(xi.pair([wi.matrix[r][j] for r in range(n)]) for j in range(n)))


def _braid_order(rs, i, j):
    prod = rs.cartan[i][j] * rs.cartan[j][i]
    return {0: 2, 1: 3, 2: 4, 3: 6}[prod]


def nilhecke_relations(rs: RootSystem, D: int) -> dict:
    """nabla_a^2 = 0, braid relations between simple operators, and the
    twisted Leibniz rule, on all monomials up to degree D."""
    n = rs.rank
    fails = []
    checked = {"square": 0, "braid": 0, "leibniz": 0}
    simple_idx = [rs.root_index(a) for a in rs.simple_roots]
    for d in range(D + 1):
        mons = [Poly.monomial(e) for e in monomials(n, d)]
        for f in mons:
            for a in range(len(rs.positive_roots)):
                checked["square"] += 1
                if demazure_poly(rs, a, demazure_poly(rs, a, f)):
                    fails.append({"relation": "square", "root": a, "poly": str(f)})
            for i in range(n):
                for j in range(i + 1, n):
                    mij = _braid_order(rs, i, j)
                    left, right = f, f
                    for t in range(mij):
                        left = demazure_poly(rs, simple_idx[(i, j)[t % 2]], left)
                        right = demazure_poly(rs, simple_idx[(j, i)[t % 2]], right)
                    checked["braid"] += 1
                    if left != right:
                        fails.append({"relation": "braid", "pair": [i + 1, j + 1],
                                      "poly": str(f)})
    # twisted Leibniz on products of low-degree monomials
    low = [Poly.monomial(e) for d in range(min(D, 3) + 1) for e in monomials(n, d)]
    for a in range(len(rs.positive_roots)):
        s = rs.reflections[a]
        for f in low:
            for g in low:
                checked["leibniz"] += 1
                lhs = demazure_poly(rs, a, f * g)
                if lhs != demazure_poly(rs, a, f) * g + act(s, f) * demazure_poly(rs, a, g):
                    fails.append({"relation": "leibniz", "root": a, "f": str(f), "g": str(g)})
    rep = {"operator": "nilhecke-relations", "params": {"type": rs.label},
           "degreesChecked": list(range(D + 1)), "checked": checked,
           "status": "pass" if not fails else "fail"}
    if fails:
        rep["witness"] = fails[0]
    return rep
