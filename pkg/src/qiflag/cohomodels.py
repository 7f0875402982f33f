"""Cohomology tables from two-term complexes.

The reduced complex of Q_k is

    delta : (prod_a Q_{k_a}(W_a)) + k[V]  ->  k[V]^A,   ((f_a), f) -> (f_a - f),

so H^even = ker delta and H^odd = coker delta (shifted by one).  The skeleton
complex replaces Q_{k_a}(W_a) by quotients k[V x W] / Q_1(W_a).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .coxeter import RootSystem, as_mult
from .polyring import Poly, chart, dim_poly, invariant_vectors, monomials, series_div, series_mul
from .quasirings import (QuasiCovariantRing, QuasiInvariantRing, borel_series,
                         invariant_series, qinv_single_basis)
from .ratcore import EchelonBasis, null_vectors, row_echelon, row_rank, span_basis


@dataclass
class TwoTermComplex:
    """Degreewise matrices (as column lists) of a map between graded spaces."""

    source_dims: Dict[int, int] = field(default_factory=dict)
    target_dims: Dict[int, int] = field(default_factory=dict)
    columns: Dict[int, List[List[Fraction]]] = field(default_factory=dict)

    def rank(self, d: int) -> int:
        cols = self.columns[d]
        return row_rank(cols, self.target_dims[d]) if cols else 0

    def kernel_dim(self, d: int) -> int:
        return self.source_dims[d] - self.rank(d)

    def cokernel_dim(self, d: int) -> int:
        return self.target_dims[d] - self.rank(d)

    def image(self, d: int):
        cols = self.columns[d]
        return span_basis(cols, self.target_dims[d]) if cols else []


def reduced_complex(rs: RootSystem, k, D: int) -> TwoTermComplex:
    k = as_mult(rs, k)
    n = rs.rank
    roots = range(len(rs.positive_roots))
    cx = TwoTermComplex()
    for d in range(D + 1):
        N = dim_poly(n, d)
        A = len(rs.positive_roots)
        cols = []
        for a in roots:
            for v in qinv_single_basis(rs, a, k(a), d):
                col = [Fraction(0)] * (N * A)
                col[a * N:(a + 1) * N] = v
                cols.append(col)
        for t in range(N):
            col = [Fraction(0)] * (N * A)
            for a in roots:
                col[a * N + t] = Fraction(-1)
            cols.append(col)
        cx.source_dims[d] = len(cols)
        cx.target_dims[d] = N * A
        cx.columns[d] = cols
    return cx


def _table(even: Dict[int, int], odd: Dict[int, int]) -> List[Tuple[str, int, int]]:
    rows = [("even", 2 * d, v) for d, v in sorted(even.items())]
    rows += [("odd", 2 * d + 1, v) for d, v in sorted(odd.items())]
    for parity, top, _ in rows:
        assert (top % 2 == 0) == (parity == "even")
    return rows


class DimensionMismatch(AssertionError):
    pass


def h_even(rs: RootSystem, k, D: int) -> dict:
    k = as_mult(rs, k)
    cx = reduced_complex(rs, k, D)
    ker = {d: cx.kernel_dim(d) for d in range(D + 1)}
    q = QuasiInvariantRing(rs, k).dims(D)
    ok = all(ker[d] == q[d] for d in range(D + 1))
    rep = {"status": "pass" if ok else "fail", "k": list(k.values),
           "table": _table(ker, {}), "qinvDims": q, "kernelDims": [ker[d] for d in range(D + 1)]}
    if not ok:
        d = next(d for d in range(D + 1) if ker[d] != q[d])
        rep["witness"] = {"degree": d, "kernel": ker[d], "qinv": q[d]}
    return rep


def h_odd_dims(rs: RootSystem, k, D: int) -> List[int]:
    cx = reduced_complex(rs, k, D)
    return [cx.cokernel_dim(d) for d in range(D + 1)]


def sum_complement_dims(rs: RootSystem, k, D: int) -> List[int]:
    """dim k[V]_d / sum_a Q_{k_a}(W_a)_d, by a direct span computation."""
    k = as_mult(rs, k)
    out = []
    for d in range(D + 1):
        N = dim_poly(rs.rank, d)
        vecs = []
        for a in range(len(rs.positive_roots)):
            vecs.extend(qinv_single_basis(rs, a, k(a), d))
        out.append(N - (row_rank(vecs, N) if vecs else 0))
    return out


def h_odd(rs: RootSystem, k, D: int) -> dict:
    """Cokernel dimensions; asserted only where a vanishing is predicted."""
    k = as_mult(rs, k)
    odd = h_odd_dims(rs, k, D)
    rep = {"k": list(k.values), "table": _table({}, dict(enumerate(odd))), "cokernelDims": odd}
    nroots = len(rs.positive_roots)
    if all(v == 0 for v in k.values) or nroots == 1:
        rep["prediction"] = "zero"
        ok = all(v == 0 for v in odd)
    elif rs.components == ["A1", "A1"]:
        # two commuting reflections: coker = k[V] / (Q_{k1} + Q_{k2})
        expect = sum_complement_dims(rs, k, D)
        rep["prediction"] = "k[V]/(Q_k1 + Q_k2)"
        rep["sumComplementDims"] = expect
        ok = odd == expect and any(odd)
    else:
        rep["status"] = "data-only"
        return rep
    rep["status"] = "pass" if ok else "fail"
    if not ok:
        rep["witness"] = {"cokernelDims": odd, "prediction": rep["prediction"]}
    return rep


def odd_products_in_image(rs: RootSystem, k, D: int) -> bool:
    """Pointwise products of cokernel representatives of degrees d1, d2 with
    d1 + d2 <= D lie in the image of delta."""
    k = as_mult(rs, k)
    cx = reduced_complex(rs, k, D)
    n = rs.rank
    A = len(rs.positive_roots)
    reps: Dict[int, list] = {}
    for d in range(D + 1):
        N = dim_poly(n, d)
        ech = EchelonBasis(N * A)
        for c in cx.columns[d]:
            ech.add(c)
        r = []
        for t in range(N * A):
            e = [0] * (N * A)
            e[t] = 1
            if ech.add(e):
                r.append([Poly.from_vector(n, d, e[a * N:(a + 1) * N]) for a in range(A)])
        reps[d] = r
    for d1 in range(D + 1):
        for d2 in range(d1, D + 1 - d1):
            if not reps[d1] or not reps[d2]:
                continue
            d = d1 + d2
            img = cx.columns[d]
            ech = EchelonBasis(dim_poly(n, d) * A)
            for c in img:
                ech.add(c)
            for x in reps[d1]:
                for y in reps[d2]:
                    vec = []
                    for a in range(A):
                        vec.extend((x[a] * y[a]).vector(d))
                    if not ech.contains(vec):
                        return False
    return True


def coinvariants(rs: RootSystem, k, D: int = None) -> dict:
    """dims of Q_k / <k[V]^W_+> Q_k, degreewise."""
    k = as_mult(rs, k)
    if D is None:
        D = sum(2 * k(a) + 1 for a in range(len(rs.positive_roots))) + 1
    n = rs.rank
    Q = QuasiInvariantRing(rs, k)
    inv = {e: [Poly.from_vector(n, e, v) for v in invariant_vectors(rs, e)]
           for e in range(1, D + 1)}
    dims = []
    for d in range(D + 1):
        N = dim_poly(n, d)
        prods = []
        for e in range(1, d + 1):
            for f in inv[e]:
                for g in Q.polys(d - e):
                    prods.append((f * g).vector(d))
        r = row_rank(prods, N) if prods else 0
        dims.append(len(Q.basis(d)) - r)
    total = sum(dims)
    ok = total == rs.order and dims[-1] == 0
    rep = {"status": "pass" if ok else "fail", "k": list(k.values), "degreeCutoff": D,
           "dims": dims, "total": total,
           "table": _table(dict(enumerate(dims)), {})}
    if not ok:
        rep["witness"] = {"dims": dims, "expectedTotal": rs.order}
    return rep


def _hyperplane_rows(rs: RootSystem, a: int, d: int):
    """Independent rows cutting out Q_1(W_a)_d inside k[V x W]_d: the remainder
    of p_w - p_{s_a w} modulo a must vanish for each pair {w, s_a w}."""
    n = rs.rank
    N = dim_poly(n, d)
    W = rs.order
    rem = chart(rs.positive_roots[a]).remainder_rows(d, 1)
    s = rs.reflections[a]
    rows = []
    done = set()
    for i, w in enumerate(rs.group):
        j = rs.index(s * w)
        if (j, i) in done:
            continue
        done.add((i, j))
        for r in rem:
            row = [Fraction(0)] * (N * W)
            row[i * N:(i + 1) * N] = r
            row[j * N:(j + 1) * N] = [-x for x in r]
            rows.append(row)
    basis, _ = row_echelon(rows, N * W)
    return basis


def skeleton_cohomology(rs: RootSystem, D: int) -> dict:
    """Even part: Q_1 splines.  Odd part: coker of the diagonal map
    k[V x W] -> sum_a k[V x W]/Q_1(W_a)."""
    n = rs.rank
    W = rs.order
    even_spline = QuasiCovariantRing(rs, 1).dims(D)
    even, odd, euler = [], [], []
    ok = True
    for d in range(D + 1):
        N = dim_poly(n, d)
        blocks = [_hyperplane_rows(rs, a, d) for a in range(len(rs.positive_roots))]
        codims = [len(b) for b in blocks]
        stacked = [r for b in blocks for r in b]
        rk = row_rank(stacked, N * W) if stacked else 0
        source = N * W
        target = sum(codims)
        ker = source - rk
        coker = target - rk
        even.append(ker)
        odd.append(coker)
        euler.append({"degree": d, "source": source, "target": target, "kernel": ker,
                      "cokernel": coker, "rankNullity": source - target == ker - coker})
        if source - target != ker - coker or ker != even_spline[d]:
            ok = False
    rep = {"status": "pass" if ok else "fail", "evenDims": even, "splineDims": even_spline,
           "oddDims": odd, "euler": euler,
           "table": _table(dict(enumerate(even)), dict(enumerate(odd)))}
    if not ok:
        rep["witness"] = {"evenDims": even, "splineDims": even_spline}
    return rep


def borel_dims(rs: RootSystem, m, D: int) -> dict:
    """Hilb(k[V]) Hilb(Q_k) / Hilb(k[V]^W) with k = [(m+1)/2], compared with
    the dimensions of Q_{2k+1} splines."""
    m = as_mult(rs, m)
    k = m.map(lambda v: (v + 1) // 2)
    series = borel_series(rs, k, D)
    odd = QuasiCovariantRing(rs, k.map(lambda v: 2 * v + 1)).dims(D)
    integral = all(x.denominator == 1 for x in series)
    ok = integral and [int(x) for x in series] == odd
    rep = {"status": "pass" if ok else "fail", "m": list(m.values), "k": list(k.values),
           "borelSeries": [str(x) for x in series], "qcovDims": odd}
    if not ok:
        rep["witness"] = {"borelSeries": [str(x) for x in series], "qcovDims": odd}
    return rep
