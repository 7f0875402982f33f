"""Quasi-invariants Q_k(W), quasi-covariant splines Q_m(W) and the checks
relating them (invariants, Borel map, freeness, iterated joins)."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .coxeter import RootSystem, as_mult, MultiplicityFunction
from .momentgraph import (EdgeIdealAssignment, SplineElement, bruhat_graph,
                          bruhat_ideals, is_spline, spline_from_vector,
                          spline_to_vector, spline_vectors)
from .polyring import (GradedSubspace, Poly, act, act_vector, action_matrix,
                       chart, dim_poly, divisible_by_linear_power, invariant_vectors,
                       monomial_index, monomials, root_poly, series_div, series_mul)
from .ratcore import (EchelonBasis, null_vectors, row_rank, same_span,
                      contains_span, span_basis)


class MembershipError(ValueError):
    pass


# -- quasi-invariants ----------------------------------------------------------

def qinv_membership(rs: RootSystem, p: Poly, k) -> bool:
    """s_a(p) = p mod a^{2 k_a} for every positive root a."""
    k = as_mult(rs, k)
    for a, (beta, s) in enumerate(zip(rs.positive_roots, rs.reflections)):
        ka = k(a)
        if ka == 0:
            continue
        if not divisible_by_linear_power(p - act(s, p), beta, 2 * ka):
            return False
    return True


def _qinv_constraints(rs, exps: Dict[int, int], d: int):
    """Rows R with R p = 0 iff the remainder of p - s_a p by a^{2 k_a} vanishes."""
    N = dim_poly(rs.rank, d)
    rows = []
    for a, ka in sorted(exps.items()):
        if ka == 0:
            continue
        beta = rs.positive_roots[a]
        S = action_matrix(rs.reflections[a], d)
        for r in chart(beta).remainder_rows(d, 2 * ka):
            # r (I - S)
            row = [r[j] - sum((r[i] * S[i][j] for i in range(N) if r[i] and S[i][j]),
                              Fraction(0)) for j in range(N)]
            if any(row):
                rows.append(row)
    return rows


def qinv_vectors_for(rs, exps: Dict[int, int], d: int):
    """Basis of {p : remainder conditions for the roots in exps}."""
    N = dim_poly(rs.rank, d)
    return null_vectors(_qinv_constraints(rs, exps, d), N)


def qinv_basis(rs: RootSystem, k, d: int) -> List[List[Fraction]]:
    k = as_mult(rs, k)
    return qinv_vectors_for(rs, dict(enumerate(k.per_root())), d)


def qinv_single_basis(rs: RootSystem, root: int, ka: int, d: int):
    """Q_{k_a}(W_a): quasi-invariants of the reflection subgroup of one root."""
    return qinv_vectors_for(rs, {root: ka}, d)


class QuasiInvariantRing:
    def __init__(self, rs: RootSystem, k):
        self.rs = rs
        self.k = as_mult(rs, k)
        self.space = GradedSubspace(rs.rank)

    def basis(self, d: int):
        if d not in self.space:
            self.space.set(d, qinv_basis(self.rs, self.k, d) if d >= 0 else [])
        return self.space[d]

    def polys(self, d: int) -> List[Poly]:
        self.basis(d)
        return self.space.polys(d)

    def dims(self, D: int) -> List[int]:
        return [len(self.basis(d)) for d in range(D + 1)]

    def contains(self, p: Poly) -> bool:
        return qinv_membership(self.rs, p, self.k)


# -- quasi-covariants -----------------------------------------------------------

_GRAPHS: Dict[tuple, object] = {}


def bruhat(rs):
    key = (rs.label, rs.lattice, id(rs))
    g = _GRAPHS.get(key)
    if g is None:
        g = _GRAPHS[key] = bruhat_graph(rs)
    return g


def qcov_basis(rs: RootSystem, m, d: int) -> List[List[Fraction]]:
    g = bruhat(rs)
    return spline_vectors(g, bruhat_ideals(g, m), rs.rank, d)


def qcov_membership(rs: RootSystem, m, u: Sequence[Poly]) -> bool:
    g = bruhat(rs)
    return is_spline(g, bruhat_ideals(g, m), u) is None


def fqgkm_membership(rs: RootSystem, m, u: Sequence[Poly]) -> bool:
    """Idempotent form: the w-th entry of (1 (x) e_a) u is (u_w - u_{s_a w})/2,
    which must lie in <a^{m_a}> for all a and w."""
    m = as_mult(rs, m)
    for a, s in enumerate(rs.reflections):
        ma = m(a)
        if ma == 0:
            continue
        beta = rs.positive_roots[a]
        for i, w in enumerate(rs.group):
            j = rs.index(s * w)
            comp = (u[i] - u[j]) / 2
            if not divisible_by_linear_power(comp, beta, ma):
                return False
    return True


class QuasiCovariantRing:
    def __init__(self, rs: RootSystem, m):
        self.rs = rs
        self.m = as_mult(rs, m)
        self.graph = bruhat(rs)
        self.ideals = bruhat_ideals(self.graph, self.m)
        self.space = GradedSubspace(rs.rank, blocks=rs.order)

    def basis(self, d: int):
        if d not in self.space:
            self.space.set(d, spline_vectors(self.graph, self.ideals, self.rs.rank, d)
                           if d >= 0 else [])
        return self.space[d]

    def splines(self, d: int) -> List[SplineElement]:
        return [spline_from_vector(self.rs.rank, d, v, self.rs.order) for v in self.basis(d)]

    def dims(self, D: int) -> List[int]:
        return [len(self.basis(d)) for d in range(D + 1)]

    def contains(self, u) -> bool:
        return is_spline(self.graph, self.ideals, u) is None


def twisted_embedding(rs: RootSystem, f: Poly) -> SplineElement:
    """f -> (w(f))_w."""
    return SplineElement(act(w, f) for w in rs.group)


def diagonal_embedding(rs: RootSystem, f: Poly) -> SplineElement:
    return SplineElement(f for _ in rs.group)


def diagonal_action(rs: RootSystem, g, u: Sequence[Poly]) -> SplineElement:
    """(g.u)_w = g(u_{g^-1 w})."""
    gi = rs.inverse(g)
    return SplineElement(act(g, u[rs.index(gi * w)]) for w in rs.group)


def _diag_invariant_vectors(rs: RootSystem, m, d: int):
    """Diagonal-W-invariants of Q_m(W)_d: spline constraints plus u = s_i.u
    for the simple reflections, solved together."""
    g = bruhat(rs)
    ideals = bruhat_ideals(g, m)
    from .momentgraph import spline_constraints
    rows = spline_constraints(g, ideals, rs.rank, d)
    N = dim_poly(rs.rank, d)
    W = rs.order
    for s in rs.simple_reflections:
        S = action_matrix(s, d)
        si = rs.inverse(s)
        for i, w in enumerate(rs.group):
            j = rs.index(si * w)
            # u_w - s(u_{s^-1 w}) = 0
            for r in range(N):
                row = [Fraction(0)] * (N * W)
                row[i * N + r] += 1
                for c in range(N):
                    if S[r][c]:
                        row[j * N + c] -= S[r][c]
                rows.append(row)
    return null_vectors(rows, N * W)


def diag_invariants_check(rs: RootSystem, m, D: int) -> dict:
    m = as_mult(rs, m)
    k = m.map(lambda v: v // 2)
    per = []
    ok = True
    witness = None
    for d in range(D + 1):
        inv = _diag_invariant_vectors(rs, m, d)
        emb = [spline_to_vector(twisted_embedding(rs, p), d)
               for p in QuasiInvariantRing(rs, k).polys(d)]
        N = dim_poly(rs.rank, d) * rs.order
        eq = same_span(inv, emb, N) if (inv or emb) else True
        per.append({"degree": d, "invariantDim": len(inv), "qinvDim": len(emb), "equal": eq})
        if not eq and witness is None:
            ok = False
            witness = {"degree": d, "invariantDim": len(inv), "embeddedRank": row_rank(emb, N)}
    out = {"status": "pass" if ok else "fail", "m": list(m.values), "k": list(k.values),
           "degrees": per}
    if witness:
        out["witness"] = witness
    return out


# -- Borel presentation ----------------------------------------------------------------

def borel_map(rs: RootSystem, f: Poly, g: Poly, k) -> SplineElement:
    """phi(f (x) g) = (f w(g))_w, for g in Q_k."""
    if not qinv_membership(rs, g, k):
        raise MembershipError("%s is not a quasi-invariant of multiplicity %s" % (g, k))
    return SplineElement(f * act(w, g) for w in rs.group)


def invariant_series(rs: RootSystem, D: int) -> List[int]:
    return [len(invariant_vectors(rs, d)) for d in range(D + 1)]


def borel_series(rs: RootSystem, k, D: int) -> List[Fraction]:
    """Coefficients of Hilb(k[V]) Hilb(Q_k) / Hilb(k[V]^W) up to t^D."""
    n = rs.rank
    poly = [dim_poly(n, d) for d in range(D + 1)]
    q = QuasiInvariantRing(rs, k).dims(D)
    return series_div(series_mul(poly, q, D), invariant_series(rs, D), D)


def borel_iso_check(rs: RootSystem, k, D: int) -> dict:
    k = as_mult(rs, k)
    odd = k.map(lambda v: 2 * v + 1)
    Qo = QuasiCovariantRing(rs, odd)
    Qk = QuasiInvariantRing(rs, k)
    series = borel_series(rs, k, D)
    n = rs.rank
    per = []
    ok = True
    witness = None
    for d in range(D + 1):
        target = Qo.basis(d)
        images = []
        for a in range(d + 1):
            gs = Qk.polys(d - a)
            for e in monomials(n, a):
                f = Poly.monomial(e)
                for g in gs:
                    images.append(spline_to_vector(
                        SplineElement(f * act(w, g) for w in rs.group), d))
        N = dim_poly(n, d) * rs.order
        spans = same_span(images, target, N) if (images or target) else True
        dims_ok = series[d] == len(target)
        per.append({"degree": d, "qcovDim": len(target), "borelCoefficient": str(series[d]),
                    "imagesSpan": spans})
        if not (spans and dims_ok) and witness is None:
            ok = False
            witness = {"degree": d, "qcovDim": len(target), "borelCoefficient": str(series[d]),
                       "imageRank": row_rank(images, N) if images else 0}
    out = {"status": "pass" if ok else "fail", "k": list(k.values), "degrees": per}
    if witness:
        out["witness"] = witness
    return out


# -- freeness -------------------------------------------------------------------------

def default_freeness_degree(rs: RootSystem, m) -> int:
    m = as_mult(rs, m)
    return 2 * max(m.values) * len(rs.positive_roots) + rs.rank


def freeness_certificate(rs: RootSystem, m, D: Optional[int] = None) -> dict:
    """Hilbert-series quotient q(t) = Hilb(Q_m) (1-t)^n and a graded-Nakayama
    extraction of generators.  Evidence up to degree D only."""
    m = as_mult(rs, m)
    if D is None:
        D = default_freeness_degree(rs, m)
    n = rs.rank
    W = rs.order
    ring = QuasiCovariantRing(rs, m)
    hilb = ring.dims(D)
    from math import comb
    q = [sum((-1) ** j * comb(n, j) * hilb[d - j] for j in range(min(n, d) + 1))
         for d in range(D + 1)]
    partial = 0
    series_ok = all(c >= 0 for c in q)
    reached = None
    for d, c in enumerate(q):
        partial += c
        if partial == W and reached is None:
            reached = d
        if partial > W:
            series_ok = False
    if reached is None:
        series_ok = False
    # graded Nakayama: generators in degree d complete the span of
    # (positive-degree monomials) * (earlier generators) inside M_d
    gens: List[tuple] = []  # (degree, spline)
    gen_degrees = []
    relations_seen = False
    for d in range(D + 1):
        basis = ring.basis(d)
        N = dim_poly(n, d)
        ech = EchelonBasis(N * W)
        count = 0
        for (dg, u) in gens:
            for e in monomials(n, d - dg):
                if d - dg == 0:
                    continue
                f = Poly.monomial(e)
                v = spline_to_vector([f * p for p in u], d)
                if not ech.add(v):
                    relations_seen = True
                count += 1
        for v in basis:
            if ech.add(v):
                u = spline_from_vector(n, d, v, W)
                gens.append((d, u))
                gen_degrees.append(d)
        if len(ech) != len(basis):
            raise AssertionError("module products left the spline space")
    expected = sorted(d for d, c in enumerate(q) for _ in range(max(c, 0)))
    nak_ok = len(gen_degrees) == W and sorted(gen_degrees) == expected
    if m.all_even() or m.all_odd():
        hypothesis = "uniform-parity"
    else:
        hypothesis = "experiment"
    good = series_ok and nak_ok and not relations_seen
    if hypothesis == "experiment":
        status = "data-only"
    else:
        status = "pass" if good else "fail"
    out = {
        "status": status,
        "hypothesis": hypothesis,
        "m": list(m.values),
        "degreeCutoff": D,
        "hilbert": hilb,
        "quotientSeries": q,
        "basisDegrees": sorted(gen_degrees),
        "rank": W,
        "relationsFound": relations_seen,
        "certificateHolds": good,
        "generators": [[str(p) for p in u] for _, u in gens],
    }
    if status == "fail":
        out["witness"] = {"quotientSeries": q, "basisDegrees": sorted(gen_degrees),
                          "relationsFound": relations_seen}
    return out


# -- iterated relative joins -------------------------------------------------------------

def _symmetrise(rs, root: int, d: int):
    """Matrix of q -> (q + s_a q)/2 on degree-d coefficients."""
    S = action_matrix(rs.reflections[root], d)
    N = len(S)
    return [[(Fraction(int(i == j)) + S[i][j]) / 2 for j in range(N)] for i in range(N)]


def _times_poly_matrix(g: Poly, n: int, d_src: int):
    """Matrix of multiplication by homogeneous g from degree d_src."""
    e = g.degree()
    tgt = monomial_index(n, d_src + e)
    src = monomials(n, d_src)
    M = [[Fraction(0)] * len(src) for _ in range(len(tgt))]
    for j, mono in enumerate(src):
        for f, c in g.terms.items():
            M[tgt[tuple(a + b for a, b in zip(f, mono))]][j] += c
    return M


def iterated_join_basis(rs: RootSystem, root: int, k: int, d: int) -> List[List[Fraction]]:
    """Q_k(W_a)_d built by k fiber products starting from k[V]:

        Q_{j+1} = { p in Q_j : p = q_+ + a^2 r,  q in k[V], r in Q_j },

    where q_+ is the symmetrisation of q under s_a.  Each step is solved as a
    nullspace in the unknowns (coefficients of p in a Q_j basis, q, r) and
    projected onto p.
    """
    n = rs.rank
    alpha2 = root_poly(rs.positive_roots[root]) ** 2
    # cache of bases per (j, degree)
    cache: Dict[tuple, list] = {}

    def basis(j, deg):
        if deg < 0:
            return []
        key = (j, deg)
        if key in cache:
            return cache[key]
        N = dim_poly(n, deg)
        if j == 0:
            res = [[Fraction(int(i == t)) for i in range(N)] for t in range(N)]
        else:
            prev = basis(j - 1, deg)
            prev_low = basis(j - 1, deg - 2)
            sym = _symmetrise(rs, root, deg)
            cols = []  # columns of [P | -Sym | -a^2 R] acting on (c, q, b)
            for v in prev:
                cols.append(list(v))
            for t in range(N):
                cols.append([-sym[i][t] for i in range(N)])
            if prev_low:
                T = _times_poly_matrix(alpha2, n, deg - 2)
                for v in prev_low:
                    cols.append([-sum((T[i][s] * v[s] for s in range(len(v)) if v[s]),
                                      Fraction(0)) for i in range(N)])
            rows = [[c[i] for c in cols] for i in range(N)]
            sol = null_vectors(rows, len(cols))
            P = len(prev)
            ps = []
            for x in sol:
                cvec = x[:P]
                if any(cvec):
                    ps.append([sum((cvec[t] * prev[t][i] for t in range(P) if cvec[t]),
                                   Fraction(0)) for i in range(N)])
            res = span_basis(ps, N) if ps else []
        cache[key] = res
        return res

    return basis(k, d)

