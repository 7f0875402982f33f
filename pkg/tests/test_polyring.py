from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import INVARIANT_DEGREES, expand
from qiflag.coxeter import RootSystem
from qiflag.polyring import (Poly, act, action_matrix, act_vector, dim_poly, divide_by_linear_power,
                             divisible_by_linear_power, exact_divide, format_poly, invariant_vectors,
                             monomials, parse_poly, reynolds, series_div, series_mul)


def polys(n, max_deg=3):
    exps = st.tuples(*[st.integers(0, max_deg)] * n)
    coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)
    return st.dictionaries(exps, coef, max_size=5).map(lambda t: Poly(n, t))


def test_monomial_counts():
    for n in (1, 2, 3):
        for d in range(6):
            assert len(monomials(n, d)) == dim_poly(n, d)
            assert len(set(monomials(n, d))) == dim_poly(n, d)


@settings(max_examples=80, deadline=None)
@given(polys(2), polys(2), polys(2))
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p - p == Poly(2)


@settings(max_examples=80, deadline=None)
@given(polys(2))
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), 2) == p


def test_parse_examples():
    p = parse_poly("x1^2 - 2*x1*x2 + 1/3", 2)
    assert p.coeff((1, 1)) == -2 and p.coeff((0, 0)) == Fraction(1, 3)
    with pytest.raises(ValueError):
        parse_poly("x1 +* x2", 2)


@settings(max_examples=60, deadline=None)
@given(polys(2), polys(2), st.sampled_from(["A2", "B2", "G2"]))
def test_action_is_ring_hom_and_group_action(p, q, label):
    rs = RootSystem(label)
    for w in rs.group[:4]:
        assert act(w, p * q) == act(w, p) * act(w, q)
        for v in rs.group[:4]:
            assert act(w * v, p) == act(w, act(v, p))


def test_action_matrix_matches_poly_action():
    rs = RootSystem("B2")
    p = parse_poly("3*x1^2*x2 - x2^3 + x1*x2^2", 2)
    for w in rs.group:
        assert Poly.from_vector(2, 3, act_vector(w, 3, p.vector(3))) == act(w, p)
        assert len(action_matrix(w, 3)) == dim_poly(2, 3)


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A1xA1"])
def test_invariant_dims_match_molien(label):
    rs = RootSystem(label)
    want = expand({0: 1}, INVARIANT_DEGREES[label], 8)
    assert [len(invariant_vectors(rs, d)) for d in range(9)] == want


@settings(max_examples=50, deadline=None)
@given(polys(2))
def test_reynolds_is_invariant(p):
    rs = RootSystem("A2")
    r = reynolds(rs, p)
    assert all(act(w, r) == r for w in rs.group)


@settings(max_examples=80, deadline=None)
@given(polys(2), st.integers(0, 3), st.sampled_from([(1, 0), (1, 1), (1, -2), (0, 3)]))
def test_linear_division(p, m, alpha):
    a = Poly.linear(alpha)
    q, r = divide_by_linear_power(p, alpha, m)
    assert p == a ** m * q + r
    # remainder has no alpha^m factor unless zero
    assert (not r) or not divisible_by_linear_power(r, alpha, m)
    assert divisible_by_linear_power(p, alpha, m) == (not r)
    assert exact_divide(a ** m * p, alpha, m) == p


def test_exact_divide_raises():
    with pytest.raises(ArithmeticError):
        exact_divide(Poly.var(2, 0), (0, 1))


def test_series_helpers():
    assert series_mul([1, 1], [1, 2, 3], 3) == [1, 3, 5, 3]
    assert series_div([1, 0, 0, 0], [1, -1], 3) == [1, 1, 1, 1]
