#!/usr/bin/env python3
"""
Test exact matrices and polynomials
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactnum import (SparseMatrix, commutant_dimension, coordinates, evaluate_polynomial, format_rational, kernel_basis,
                      minimal_polynomial, poly_divides, poly_from_roots, rank, rational_roots, span_rank,
                      spanned_algebra_dimension, to_rational)


def test_to_rational_accepts_exact_inputs():
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational(5) == Fraction(5)
    assert to_rational(Fraction(-1, 2)) == Fraction(-1, 2)


def test_to_rational_rejects_floats():
    with pytest.raises(ValueError):
        to_rational(0.5)


def test_format_rational():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-3, 4)) == "-3/4"


def test_zeros_are_not_stored():
    m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): 3})
    assert m.nnz == 1
    assert m.get(0, 0) == 0


def test_identity_is_neutral():
    a = SparseMatrix.from_rows([[1, 2], [3, 4]])
    assert SparseMatrix.identity(2) @ a == a
    assert a @ SparseMatrix.identity(2) == a


def test_kron_shape_and_entries():
    a = SparseMatrix.from_rows([[0, 1], [1, 0]])
    product = a.kron(SparseMatrix.identity(2))
    assert product.shape == (4, 4)
    assert product.get(0, 2) == 1
    assert product.get(3, 1) == 1


def test_out_of_range_entry_raises():
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, {(2, 0): 1})


def test_kernel_of_rank_one_matrix():
    a = SparseMatrix.from_rows([[1, 2], [2, 4]])
    assert rank(a) == 1
    assert kernel_basis(a) == [(Fraction(-2), Fraction(1))]


def test_coordinates_inside_and_outside_span():
    basis = [{0: 1, 1: 1}, {1: 1}]
    assert coordinates(basis, {0: 2, 1: 5}) == [Fraction(2), Fraction(3)]
    assert coordinates([{0: 1}], {1: 1}) is None


def test_minimal_polynomial_of_diagonal():
    assert minimal_polynomial(SparseMatrix.diagonal([1, 2])) == (Fraction(2), Fraction(-3), Fraction(1))
    assert minimal_polynomial(SparseMatrix.identity(3)) == (Fraction(-1), Fraction(1))


def test_minimal_polynomial_of_nilpotent_block():
    block = SparseMatrix(3, 3, {(0, 1): 1, (1, 2): 1})
    assert minimal_polynomial(block) == (0, 0, 0, 1)


def test_rational_roots():
    assert rational_roots((2, -3, 1)) == [Fraction(1), Fraction(2)]
    assert rational_roots((-2, 0, 1)) == []


def test_poly_from_roots_and_divides():
    assert poly_from_roots([1, 2]) == (Fraction(2), Fraction(-3), Fraction(1))
    assert poly_divides((-1, 1), (2, -3, 1))
    assert not poly_divides((1, 1), (2, -3, 1))


def test_commutant_dimension():
    assert commutant_dimension([SparseMatrix.identity(3)]) == 9
    jordan = SparseMatrix(2, 2, {(0, 1): 1})
    assert commutant_dimension([jordan]) == 2


def test_spanned_algebra_dimension():
    jordan = SparseMatrix(2, 2, {(0, 1): 1})
    assert spanned_algebra_dimension([jordan]) == 2
    lower = SparseMatrix(2, 2, {(1, 0): 1})
    assert spanned_algebra_dimension([jordan, lower]) == 4


def test_span_rank_with_tuple_keys():
    vectors = [{(0, 0): 1}, {(1, 1): 1}, {(0, 0): 2, (1, 1): 2}]
    assert span_rank(vectors) == 2


def test_to_numpy_keeps_fractions():
    array = SparseMatrix.from_rows([[Fraction(1, 2), 0]]).to_numpy()
    assert array.dtype == object
    assert array[0, 0] == Fraction(1, 2)


small_matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda rows: st.integers(min_value=1, max_value=4).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols),
                              min_size=rows, max_size=rows)))

square_matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda size: st.lists(st.lists(st.integers(-3, 3), min_size=size, max_size=size), min_size=size, max_size=size))


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_rank_nullity(rows):
    a = SparseMatrix.from_rows(rows)
    kernel = kernel_basis(a)
    assert rank(a) + len(kernel) == a.n_cols
    for vector in kernel:
        assert not a.apply(dict(enumerate(vector)))


@settings(max_examples=40, deadline=None)
@given(square_matrices)
def test_minimal_polynomial_annihilates(rows):
    a = SparseMatrix.from_rows(rows)
    assert evaluate_polynomial(minimal_polynomial(a), a).is_zero()
