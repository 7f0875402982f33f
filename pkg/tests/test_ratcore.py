from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qiflag.ratcore import (DimensionError, EchelonBasis, RatMatrix, contains_span, int_row,
                            null_vectors, nullspace, rank, row_rank, rref, same_span, solve,
                            span_basis)

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_r=5, max_c=5):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(
            lambda c: st.lists(st.lists(fracs, min_size=c, max_size=c), min_size=r, max_size=r)))


def low_rank(max_n=5):
    # products of thin factors give rank-deficient matrices with mixed signs
    return st.tuples(st.integers(1, max_n), st.integers(1, max_n), st.integers(1, 3)).flatmap(
        lambda t: st.tuples(st.lists(st.lists(fracs, min_size=t[2], max_size=t[2]), min_size=t[0], max_size=t[0]),
                            st.lists(st.lists(fracs, min_size=t[1], max_size=t[1]), min_size=t[2], max_size=t[2])))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert row_rank(rows, len(rows[0])) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(low_rank())
def test_rank_deficient_nullspace(ab):
    a, b = ab
    rows = (RatMatrix.from_rows(a) @ RatMatrix.from_rows(b)).to_rows()
    ncols = len(rows[0])
    ns = null_vectors(rows, ncols)
    r = row_rank(rows, ncols)
    assert len(ns) == ncols - r
    for v in ns:
        assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in rows)
    if ns:
        assert row_rank(ns, ncols) == len(ns)
    assert r == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_is_canonical(rows):
    ncols = len(rows[0])
    r1, piv = rref(rows, ncols)
    # rref of a shuffled, rescaled copy of the rows is the same
    other = [[2 * x for x in row] for row in reversed(rows)]
    r2, piv2 = rref(other, ncols)
    assert r1 == r2 and piv == piv2
    for i, p in enumerate(piv):
        assert r1[i][p] == 1
        assert all(r1[j][p] == 0 for j in range(len(r1)) if j != i)


@settings(max_examples=50, deadline=None)
@given(matrices(4, 4), st.lists(fracs, min_size=4, max_size=4))
def test_solve_consistent(rows, x):
    m = RatMatrix.from_rows(rows)
    x = x[:m.cols]
    b = m @ x
    sol = solve(m, b)
    assert sol is not None and m @ sol == b


def test_solve_inconsistent():
    m = RatMatrix.from_rows([[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is None


def test_int_row_clears_denominators():
    assert int_row([Fraction(1, 2), Fraction(-1, 3), 0]) in ([3, -2, 0], [-3, 2, 0])


def test_span_helpers():
    a = [[1, 0, 1], [0, 1, 1]]
    b = [[1, 1, 2], [1, -1, 0]]
    assert same_span(a, b, 3)
    assert contains_span(a, [[2, 3, 5]], 3)
    assert not contains_span(a, [[0, 0, 1]], 3)
    assert len(span_basis(a + b, 3)) == 2


def test_echelon_basis_incremental():
    e = EchelonBasis(3)
    assert e.add([1, 2, 3])
    assert not e.add([2, 4, 6])
    assert e.contains([Fraction(1, 2), 1, Fraction(3, 2)])
    assert e.add([0, 0, 1])
    assert len(e) == 2


def test_matrix_shapes():
    m = RatMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert m.T.rows == 3 and m.T.cols == 2
    assert rank(m) == 2
    ns = nullspace(m)
    assert (m @ ns) == RatMatrix.zeros(2, ns.cols)
    with pytest.raises(DimensionError):
        m @ m
    assert RatMatrix.identity(3) @ [1, 2, 3] == [1, 2, 3]
