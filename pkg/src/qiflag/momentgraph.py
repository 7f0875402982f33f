"""Moment graphs, generalized splines, thickening counts and pi_1 data."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import Poly, dim_poly, monomials, monomial_index, root_poly
from .ratcore import null_vectors, int_row, row_echelon


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    label: Tuple  # covector in simple-root coordinates
    root: Optional[int] = None  # index into positive roots for Bruhat graphs


class MomentGraph:
    """Vertices (WeylElements or opaque ids) and labelled edges."""

    def __init__(self, vertices, edges: Sequence[Edge], name: str = "", rs=None):
        seen = set()
        for e in edges:
            if e.u == e.v:
                raise ValueError("loop at vertex %r" % (e.u,))
            key = frozenset((e.u, e.v))
            if key in seen:
                raise ValueError("duplicate edge %r" % (tuple(key),))
            seen.add(key)
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.name = name
        self.rs = rs

    @property
    def is_bruhat(self) -> bool:
        return self.rs is not None

    def vertex_name(self, i: int) -> str:
        v = self.vertices[i]
        return v.name() if hasattr(v, "name") else str(v)

    def __repr__(self):
        return "MomentGraph(%s: %d vertices, %d edges)" % (
            self.name, len(self.vertices), len(self.edges))


def bruhat_graph(rs) -> MomentGraph:
    """Vertices W; e(s_a, w) joins w and s_a w with label a."""
    group = rs.group
    edges = []
    seen = set()
    for i, w in enumerate(group):
        for a, s in enumerate(rs.reflections):
            j = rs.index(s * w)
            key = (min(i, j), max(i, j))
            if key in seen:
                continue
            seen.add(key)
            edges.append(Edge(key[0], key[1], rs.positive_roots[a], a))
    return MomentGraph(group, edges, name="Bruhat(%s)" % rs.label, rs=rs)


@dataclass(frozen=True)
class GraphAutomorphism:
    vertex_perm: Tuple[int, ...]
    edge_perm: Tuple[int, ...]
    label_signs: Tuple[int, ...]  # image label = sign * g(label)

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """self after other."""
        return GraphAutomorphism(
            tuple(self.vertex_perm[i] for i in other.vertex_perm),
            tuple(self.edge_perm[i] for i in other.edge_perm),
            tuple(self.label_signs[other.edge_perm[e]] * other.label_signs[e]
                  for e in range(len(other.edge_perm))),
        )


def w_act_on_graph(g, graph: MomentGraph) -> GraphAutomorphism:
    """w -> g w on vertices, e(s_a, w) -> e(g s_a g^-1, g w) on edges."""
    if not graph.is_bruhat:
        raise ValueError("the W-action is defined on Bruhat graphs only")
    rs = graph.rs
    vperm = tuple(rs.index(g * w) for w in graph.vertices)
    lookup = {frozenset((e.u, e.v)): k for k, e in enumerate(graph.edges)}
    eperm = []
    signs = []
    for e in graph.edges:
        k = lookup[frozenset((vperm[e.u], vperm[e.v]))]
        img = g.apply(e.label)
        target = graph.edges[k].label
        if tuple(img) == tuple(target):
            sgn = 1
        elif tuple(-x for x in img) == tuple(target):
            sgn = -1
        else:
            raise AssertionError("label mismatch: %r vs %r" % (img, target))
        # the conjugated reflection must be the one labelling the target edge
        assert rs.reflection(img) == rs.canonical(g * rs.reflections[e.root] * rs.inverse(g))
        eperm.append(k)
        signs.append(sgn)
    return GraphAutomorphism(vperm, tuple(eperm), tuple(signs))


# -- edge ideals ----------------------------------------------------------

class EdgeIdealAssignment:
    """Per edge a nonzero generator of a principal ideal.

    For the polynomial setting generators are homogeneous Polys; the Bruhat
    case alpha^m also remembers (alpha, m) so membership can use exact
    division by a linear power.
    """

    def __init__(self, generators: Dict[int, object], powers: Optional[Dict[int, tuple]] = None):
        for k, g in generators.items():
            if hasattr(g, "is_zero") and g.is_zero():
                raise ValueError("zero ideal generator on edge %d" % k)
        self.generators = generators
        self.powers = powers or {}

    def __getitem__(self, k):
        return self.generators[k]

    def exponent(self, k) -> Optional[int]:
        p = self.powers.get(k)
        return None if p is None else p[1]


def bruhat_ideals(graph: MomentGraph, m) -> EdgeIdealAssignment:
    """I(e(s_a, w)) = <a^{m_a}>."""
    rs = graph.rs
    from .coxeter import as_mult
    m = as_mult(rs, m)
    gens, powers = {}, {}
    for k, e in enumerate(graph.edges):
        mk = m(e.root)
        gens[k] = root_poly(e.label) ** mk
        powers[k] = (tuple(e.label), mk)
    return EdgeIdealAssignment(gens, powers)


_ANN_CACHE: Dict[Tuple, List[List[Fraction]]] = {}


def ideal_annihilator(g: Poly, d: int) -> List[List[Fraction]]:
    """Rows L with: q in <g>_d  <=>  L q = 0  (q a degree-d coefficient vector).

    Computed as the left kernel of the multiplication-by-g matrix, so it does
    not rely on any change of coordinates.
    """
    if not g.is_homogeneous():
        raise ValueError("inhomogeneous ideal generator %s" % g)
    key = (g, d)
    if key in _ANN_CACHE:
        return _ANN_CACHE[key]
    n = g.n
    e = g.degree()
    N = dim_poly(n, d)
    if e == 0:
        rows = []
    elif d < e:
        rows = [[Fraction(int(i == j)) for j in range(N)] for i in range(N)]
    else:
        idx = monomial_index(n, d)
        # columns of M are g * (monomials of degree d - e); L M = 0
        cols = []
        for mono in monomials(n, d - e):
            col = [Fraction(0)] * N
            for f, c in g.terms.items():
                col[idx[tuple(a + b for a, b in zip(f, mono))]] += c
            cols.append(col)
        rows = null_vectors(cols, N)
    _ANN_CACHE[key] = rows
    return rows


def spline_constraints(graph: MomentGraph, ideals: EdgeIdealAssignment, n: int, d: int):
    """Stacked linear constraints on concatenated vertex blocks."""
    N = dim_poly(n, d)
    V = len(graph.vertices)
    rows = []
    for k, e in enumerate(graph.edges):
        L = ideal_annihilator(ideals[k], d)
        for r in L:
            row = [Fraction(0)] * (N * V)
            row[e.u * N:(e.u + 1) * N] = r
            row[e.v * N:(e.v + 1) * N] = [-x for x in r]
            rows.append(row)
    return rows


def spline_vectors(graph: MomentGraph, ideals: EdgeIdealAssignment, n: int, d: int):
    rows = spline_constraints(graph, ideals, n, d)
    return null_vectors(rows, dim_poly(n, d) * len(graph.vertices))


def spline_basis(graph: MomentGraph, ideals: EdgeIdealAssignment, d: int, n: Optional[int] = None):
    """Basis (concatenated coefficient vectors) of degree-d splines."""
    if n is None:
        n = graph.rs.rank if graph.rs is not None else next(iter(ideals.generators.values())).n
    return spline_vectors(graph, ideals, n, d)


class SplineElement(tuple):
    """Tuple of ring elements, one per vertex (in graph vertex order)."""

    def __add__(self, other):
        return SplineElement(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return SplineElement(a - b for a, b in zip(self, other))

    def __neg__(self):
        return SplineElement(-a for a in self)

    def mul(self, other):
        return SplineElement(a * b for a, b in zip(self, other))

    def scale(self, f):
        return SplineElement(f * a for a in self)

    def is_zero(self):
        return all(a.is_zero() for a in self)

    def strings(self):
        return [str(a) for a in self]


def spline_from_vector(n: int, d: int, vec, nverts: int) -> SplineElement:
    N = dim_poly(n, d)
    return SplineElement(Poly.from_vector(n, d, vec[i * N:(i + 1) * N]) for i in range(nverts))


def spline_to_vector(u: Sequence[Poly], d: int) -> List[Fraction]:
    out = []
    for p in u:
        out.extend(p.vector(d))
    return out


def poly_divides(g: Poly, f: Poly) -> bool:
    """Exact divisibility for homogeneous g."""
    if f.is_zero():
        return True
    e = g.degree()
    if e == 0:
        return True
    for d in f.degrees():
        L = ideal_annihilator(g, d)
        vec = f.vector(d)
        if any(sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in L):
            return False
    return True


def is_spline(graph: MomentGraph, ideals: EdgeIdealAssignment, u: Sequence) -> Optional[int]:
    """None if u satisfies every edge congruence, else the first failing edge."""
    from .polyring import divisible_by_linear_power
    for k, e in enumerate(graph.edges):
        diff = u[e.u] - u[e.v]
        p = ideals.powers.get(k)
        ok = divisible_by_linear_power(diff, p[0], p[1]) if p is not None \
            else poly_divides(ideals[k], diff)
        if not ok:
            return k
    return None


# -- thickening and pi_1 ---------------------------------------------------------

def _edge_mults(graph: MomentGraph, m) -> List[int]:
    if isinstance(m, dict):
        return [int(m[k]) for k in range(len(graph.edges))]
    if isinstance(m, (list, tuple)) and not graph.is_bruhat:
        return [int(x) for x in m]
    if not graph.is_bruhat:
        return [int(m)] * len(graph.edges)
    from .coxeter import as_mult
    mf = as_mult(graph.rs, m)
    return [mf(e.root) for e in graph.edges]


def thickened_counts(graph: MomentGraph, m) -> Tuple[int, List[int]]:
    """Objects of the thickened moment category: vertices plus one object per
    nonempty subset of {0..m_e} for each edge."""
    mults = _edge_mults(graph, m)
    per_edge = [2 ** (me + 1) - 1 for me in mults]
    return len(graph.vertices) + sum(per_edge), per_edge


def _invariant_factors(relations: List[List[int]], ngens: int) -> List[int]:
    if not relations:
        return [0] * ngens
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    snf = smith_normal_form(Matrix(relations), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    diag += [0] * (ngens - len(diag))
    return [x for x in diag if x != 1]


def pi1_presentation(graph: MomentGraph) -> Tuple[int, List[str], List[int]]:
    """One involution per positive root; the group is their free product."""
    if not graph.is_bruhat:
        raise ValueError("pi_1 data is defined for Bruhat graphs")
    r = len(graph.rs.positive_roots)
    gens = ["g%d" % (i + 1) for i in range(r)]
    relations = ["%s^2" % g for g in gens]
    # abelianised relation matrix: row i says 2*g_i = 0
    rel_matrix = [[2 * int(i == j) for j in range(r)] for i in range(r)]
    return r, relations, _invariant_factors(rel_matrix, r)


# -- export ---------------------------------------------------------------

def _q(x):
    x = Fraction(x)
    return str(x) if x.denominator != 1 else int(x)


def graph_to_json(graph: MomentGraph, m=None) -> str:
    mults = _edge_mults(graph, m) if m is not None else [None] * len(graph.edges)
    data = {
        "name": graph.name,
        "vertices": [graph.vertex_name(i) for i in range(len(graph.vertices))],
        "edges": [{"u": graph.vertex_name(e.u), "v": graph.vertex_name(e.v),
                   "label": [_q(x) for x in e.label], "mult": mk}
                  for e, mk in zip(graph.edges, mults)],
    }
    return json.dumps(data, indent=2, sort_keys=True)


def graph_to_dot(graph: MomentGraph, m=None) -> str:
    mults = _edge_mults(graph, m) if m is not None else [None] * len(graph.edges)
    lines = ["graph \"%s\" {" % graph.name]
    for i in range(len(graph.vertices)):
        lines.append("  \"%s\";" % graph.vertex_name(i))
    for e, mk in zip(graph.edges, mults):
        lab = "(" + ",".join(str(_q(x)) for x in e.label) + ")"
        if mk is not None:
            lab += "^%d" % mk
        lines.append("  \"%s\" -- \"%s\" [label=\"%s\"];" % (
            graph.vertex_name(e.u), graph.vertex_name(e.v), lab))
    lines.append("}")
    return "\n".join(lines) + "\n"
