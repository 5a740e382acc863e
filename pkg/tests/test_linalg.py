"""Exact rational linear algebra."""

from fractions import Fraction

import pytest

from wreduce import linalg as la


def test_rref_idempotent_and_pivots():
    a = [[2, 4, 6], [1, 2, 4], [0, 0, 2]]
    r, pivots = la.rref(a)
    assert pivots == [0, 2]
    r2, pivots2 = la.rref(r)
    assert r2 == r and pivots2 == pivots


def test_rank_and_nullspace_dimensions():
    a = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert la.rank(a) == 2
    ns = la.nullspace(a)
    assert len(ns) == 1
    for v in ns:
        assert la.is_zero_vec(la.mat_vec(a, v))


def test_solve_consistent_and_inconsistent():
    a = [[1, 1], [1, -1], [2, 0]]
    x = la.solve(a, [3, 1, 4])
    assert x == [Fraction(2), Fraction(1)]
    assert la.solve([[1, 1], [1, 1]], [0, 1]) is None


def test_solve_underdetermined_sets_free_vars_to_zero():
    x = la.solve([[1, 2, 0]], [4])
    assert x == [Fraction(4), Fraction(0), Fraction(0)]


def test_inverse_round_trip_and_singular_error():
    a = [[1, 2], [3, 5]]
    inv = la.inverse(a)
    assert la.mat_mul(a, inv) == la.identity(2)
    with pytest.raises(ValueError, match="singular"):
        la.inverse([[1, 2], [2, 4]])


def test_coords_in_span_and_membership():
    basis = [[1, 0, 1], [0, 1, 1]]
    c = la.coords_in_span(basis, [2, 3, 5])
    assert c == [Fraction(2), Fraction(3)]
    assert la.in_span(basis, [1, 1, 2])
    assert not la.in_span(basis, [0, 0, 1])
    assert la.coords_in_span(basis, [0, 0, 1]) is None


def test_complete_basis_prefers_low_unit_vectors():
    rows = [[0, 1, 0, 0]]
    added = la.complete_basis(rows, 4)
    # returns only the completion: unit vectors in index order
    assert len(added) == 3
    assert la.rank(rows + added) == 4
    assert added[0] == [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]


def test_intersect_spans():
    a = [[1, 0, 0], [0, 1, 0]]
    b = [[0, 1, 0], [0, 0, 1]]
    inter = la.intersect_spans(a, b)
    assert len(inter) == 1
    assert la.in_span([[0, 1, 0]], inter[0])


def test_row_space_is_canonical():
    a = [[2, 4], [1, 3]]
    b = [[1, 0], [0, 1]]
    assert la.row_space(a) == la.row_space(b)
