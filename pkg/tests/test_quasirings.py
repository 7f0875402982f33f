import pytest
from hypothesis import given, settings, strategies as st

from oracles import qinv_a1, qinv_a1xa1, qinv_a2, spline_a1
from qiflag.coxeter import RootSystem
from qiflag.momentgraph import SplineElement
from qiflag.polyring import Poly, act, dim_poly, parse_poly
from qiflag.quasirings import (MembershipError, QuasiCovariantRing, QuasiInvariantRing, borel_map,
                               borel_series, diag_invariants_check, diagonal_action,
                               diagonal_embedding, fqgkm_membership, freeness_certificate,
                               iterated_join_basis, qcov_membership, qinv_membership,
                               qinv_single_basis, twisted_embedding)
from qiflag.ratcore import same_span


@pytest.mark.parametrize("k", range(4))
def test_a1_dims(k):
    assert QuasiInvariantRing(RootSystem("A1"), k).dims(8) == qinv_a1(k, 8)


@pytest.mark.parametrize("k", range(3))
def test_a2_dims(k):
    assert QuasiInvariantRing(RootSystem("A2"), k).dims(8) == qinv_a2(k, 8)


def test_a1xa1_dims():
    rs = RootSystem("A1xA1")
    assert QuasiInvariantRing(rs, [1, 1]).dims(6) == qinv_a1xa1(1, 1, 6)
    assert QuasiInvariantRing(rs, [1, 1]).dims(3) == [1, 0, 2, 2]
    assert QuasiInvariantRing(rs, [2, 1]).dims(7) == qinv_a1xa1(2, 1, 7)


def test_membership_examples():
    rs = RootSystem("A1")
    assert qinv_membership(rs, parse_poly("x1^3", 1), 1)
    assert not qinv_membership(rs, parse_poly("x1", 1), 1)
    assert qinv_membership(rs, parse_poly("x1^2", 1), 5)
    a2 = RootSystem("A2")
    for p in QuasiInvariantRing(a2, 1).polys(4):
        assert qinv_membership(a2, p, 1)
        assert not all(qinv_membership(a2, q, 2) for q in QuasiInvariantRing(a2, 1).polys(4))


def test_quasi_invariants_form_a_ring():
    rs = RootSystem("B2")
    R = QuasiInvariantRing(rs, [1, 1])
    ps = R.polys(4) + R.polys(2) + R.polys(5)
    for p in ps:
        for q in ps:
            assert R.contains(p * q)


def test_nested_multiplicities():
    rs = RootSystem("A2")
    for d in range(7):
        big = QuasiInvariantRing(rs, 1).basis(d)
        for v in QuasiInvariantRing(rs, 2).basis(d):
            assert qinv_membership(rs, Poly.from_vector(2, d, v), 1)
        assert len(big) >= len(QuasiInvariantRing(rs, 2).basis(d))


@pytest.mark.parametrize("m", range(4))
def test_a1_spline_dims(m):
    assert QuasiCovariantRing(RootSystem("A1"), m).dims(6) == spline_a1(m, 6)


def test_two_membership_forms_agree():
    rs = RootSystem("A2")
    Q = QuasiCovariantRing(rs, 2)
    for d in range(4):
        for u in QuasiCovariantRing(rs, 1).splines(d):
            assert qcov_membership(rs, 2, u) == fqgkm_membership(rs, 2, u) == Q.contains(u)


def test_embeddings_and_diagonal_action():
    rs = RootSystem("A2")
    f = parse_poly("x1^2*x2 - x2^3", 2)
    assert qcov_membership(rs, 5, diagonal_embedding(rs, f))
    for g in QuasiInvariantRing(rs, 1).polys(4):
        u = twisted_embedding(rs, g)
        assert qcov_membership(rs, 2, u) and qcov_membership(rs, 3, u)
        for w in rs.group:
            assert list(diagonal_action(rs, w, u)) == list(u)
    # the diagonal action preserves the spline ring
    for u in QuasiCovariantRing(rs, 2).splines(3):
        for w in rs.group:
            assert qcov_membership(rs, 2, diagonal_action(rs, w, u))


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_diag_invariants(label):
    for m in range(4):
        assert diag_invariants_check(RootSystem(label), m, 5)["status"] == "pass"


def test_borel_map_and_series():
    rs = RootSystem("A2")
    assert [int(x) for x in borel_series(rs, 1, 6)] == QuasiCovariantRing(rs, 3).dims(6)
    with pytest.raises(MembershipError):
        borel_map(rs, Poly.constant(2, 1), parse_poly("x1", 2), 1)
    one = borel_map(rs, Poly.constant(2, 1), Poly.constant(2, 1), 1)
    assert all(p == Poly.constant(2, 1) for p in one)


def test_freeness_example_degrees():
    r = freeness_certificate(RootSystem("A2"), 2)
    assert r["status"] == "pass" and r["hypothesis"] == "uniform-parity"
    assert r["basisDegrees"] == [0, 3, 3, 3, 3, 6]
    assert r["quotientSeries"][:7] == [1, 0, 0, 4, 0, 0, 1]


def test_freeness_mixed_parity_is_data_only():
    r = freeness_certificate(RootSystem("B2"), [1, 2])
    assert r["status"] == "data-only" and r["hypothesis"] == "experiment"
    assert "witness" not in r


@pytest.mark.parametrize("k", range(4))
def test_iterated_join_matches_direct(k):
    rs = RootSystem("A1")
    for d in range(7):
        assert len(iterated_join_basis(rs, 0, k, d)) == len(qinv_single_basis(rs, 0, k, d))


def test_iterated_join_on_rank_two_root():
    rs = RootSystem("A2")
    for d in range(5):
        j = iterated_join_basis(rs, 2, 1, d)
        assert same_span(j, qinv_single_basis(rs, 2, 1, d), dim_poly(2, d))
