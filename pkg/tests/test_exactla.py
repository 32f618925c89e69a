from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import count_kernel_gf, frac_rank, mod_rank
from sgcat.errors import InputError
from sgcat.exactla import (FieldSpec, LeftInverse, Matrix, Subspace, kernel_basis, kernel_matrix, rank,
                           rref, solve)

QQ = FieldSpec(0)


def small_matrices(max_dim=5, lo=-4, hi=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_matches_fraction_elimination(rows):
    assert rank(Matrix.from_rows(QQ, rows)) == frac_rank(rows)


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_matches_modular_elimination(rows, p):
    assert rank(Matrix.from_rows(FieldSpec(p), rows)) == mod_rank(rows, p)


@settings(max_examples=40, deadline=None)
@given(small_matrices(max_dim=4), st.sampled_from([2, 3]))
def test_kernel_size_matches_enumeration(rows, p):
    F = FieldSpec(p)
    m = Matrix.from_rows(F, rows)
    k = kernel_basis(m)
    assert p ** k.dim == count_kernel_gf(rows, len(rows[0]), p)
    K = kernel_matrix(m)
    assert (m @ K).is_zero()


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_kernel_rank_nullity(rows):
    m = Matrix.from_rows(QQ, rows)
    assert kernel_basis(m).dim + rank(m) == m.cols


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.data())
def test_solve_consistent_systems(rows, data):
    m = Matrix.from_rows(QQ, rows)
    x0 = data.draw(st.lists(st.integers(-3, 3), min_size=m.cols, max_size=m.cols))
    b = m @ Matrix.column(QQ, x0)
    x = solve(m, b)
    assert x is not None and m @ x == b


def test_solve_inconsistent_returns_none():
    m = Matrix.from_rows(QQ, [[1, 0], [1, 0]])
    assert solve(m, Matrix.column(QQ, [1, 2])) is None


def test_rref_pivots_and_subspace_coords():
    m = Matrix.from_rows(QQ, [[0, 2, 4], [0, 1, 2], [1, 0, 1]])
    R, piv = rref(m)
    assert piv == [0, 1]
    S = Subspace.span_rows(m)
    v = Matrix.column(QQ, [3, 1, 5])
    assert S.contains(v)
    assert not S.contains(Matrix.column(QQ, [0, 0, 1]))


def test_fractions_stay_exact():
    m = Matrix.from_rows(QQ, [[Fraction(1, 3), Fraction(1, 2)], [Fraction(2, 7), 1]])
    inv = m.inverse()
    assert m @ inv == Matrix.identity(QQ, 2)
    assert m.to_rows()[0][0] == Fraction(1, 3)


def test_left_inverse_roundtrip():
    A = Matrix.from_rows(QQ, [[1, 0], [2, 1], [0, 3]])
    li = LeftInverse(A)
    x = Matrix.column(QQ, [5, -2])
    assert li.apply(A @ x) == x
    assert li.apply(Matrix.column(QQ, [1, 0, 0])) is None
    with pytest.raises(InputError):
        LeftInverse(Matrix.from_rows(QQ, [[1, 1], [1, 1]]))


def test_prime_field_reduction_and_denominators():
    F = FieldSpec(5)
    m = Matrix.from_rows(F, [[Fraction(1, 2)]])
    assert m.to_rows() == [[3]]
    with pytest.raises(InputError):
        Matrix.from_rows(F, [[Fraction(1, 5)]])


def test_field_parse():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("Fp 5") == FieldSpec(5)
    assert FieldSpec.parse("Fp:7") == FieldSpec(7)
    with pytest.raises(InputError):
        FieldSpec.parse("Fp 6")
    with pytest.raises(InputError):
        FieldSpec.parse("R")
