#!/usr/bin/env python3
"""
Test the concrete modules and the checks built on them
"""

from fractions import Fraction

import pytest

from algebra import GenToken
from exactnum import CapExceeded, SparseMatrix, minimal_polynomial
from indexing import weight_class
from modules import (RepModule, basis_proxy_check, direct_sum, double_centralizer_check, dump_module,
                     expected_highest_weights, faithfulness_check, faithfulness_consistency,
                     faithfulness_polynomial, faithfulness_report, grassmannian_module, hyperoctahedral_generators,
                     load_module, monomial_action, nflag_module, parse_module_spec, rectified_module,
                     singular_vectors, t_element_matrix, t_element_report, t_min_poly_check, t_target_polynomial,
                     t_weight_space_matrix, tensor_module, twist_by_theta)


def test_grassmannian_matrices():
    module = grassmannian_module(4, -1)
    assert module.dimension == 3
    assert dict(module.e_matrices[1].items()) == {(1, 0): 1, (2, 1): 2}
    assert module.h_matrices[1] == SparseMatrix.diagonal([-4, -1, 2])
    assert module.weights == [(0, 4, 0), (1, 2, 1), (2, 0, 2)]


def test_grassmannian_rejects_odd_symplectic():
    with pytest.raises(ValueError):
        grassmannian_module(3, -1)


@pytest.mark.parametrize("v,eps", [(2, 1), (4, -1), (5, 1), (6, -1)])
def test_nflag_rank_three_is_grassmannian(v, eps):
    flag = nflag_module(3, v, eps)
    rank_one = grassmannian_module(v, eps)
    for i in (1, 2):
        assert flag.e_matrices[i] == rank_one.e_matrices[i]
        assert flag.h_matrices[i] == rank_one.h_matrices[i]


def test_nflag_guards():
    with pytest.raises(ValueError):
        nflag_module(4, 3, 1)
    assert nflag_module(4, 4, -1).dimension == 3


def test_rectified_module():
    module = rectified_module(2, 3)
    assert module.dimension == 1
    assert module.e_matrices[1].get(0, 0) == 1
    assert module.h_matrices[1].is_zero()
    with pytest.raises(ValueError):
        rectified_module(2, 4)


def test_module_shape_validation():
    with pytest.raises(ValueError):
        RepModule("broken", 3, [0], [(0, 0, 0)], {1: SparseMatrix.zeros(1)}, {1: SparseMatrix.zeros(1)})
    with pytest.raises(ValueError):
        RepModule("broken", 2, [0], [(0, 0)], {1: SparseMatrix.zeros(2)}, {1: SparseMatrix.zeros(1)})


def test_derived_token_matrices():
    module = grassmannian_module(4, -1)
    assert module.token_matrix(GenToken("f", 1)) == module.e_matrices[2]
    assert module.token_matrix(GenToken("hprime", 1)) == SparseMatrix.diagonal([-4, 0, 4])
    assert module.token_matrix(GenToken("idem", 0, (0, 4, 0))) == SparseMatrix.diagonal([1, 0, 0])
    assert module.token_matrix(GenToken("idem", 0, (1, 1, 1))).is_zero()


def test_theta_twist_swaps_e_and_f():
    module = grassmannian_module(4, -1)
    twisted = twist_by_theta(module)
    assert twisted.e_matrices[1] == module.e_matrices[2]
    assert twisted.h_matrices[1] == -module.h_matrices[1]
    assert twisted.weights[0] == (0, -4, 0)


def test_direct_sum():
    total = direct_sum([grassmannian_module(2, 1), grassmannian_module(4, 1)])
    assert total.dimension == 5
    assert total.e_matrices[1].get(3, 2) == 1
    with pytest.raises(ValueError):
        direct_sum([grassmannian_module(2, 1), tensor_module(2, 1)])


def test_tensor_module_and_cap():
    module = tensor_module(3, 2)
    assert module.dimension == 9
    assert module.weights[0] == (2, 0, 2)
    with pytest.raises(CapExceeded):
        tensor_module(4, 3, cap=32)


def test_hyperoctahedral_generator_count():
    generators = hyperoctahedral_generators(2, 2)
    assert len(generators) == 3
    for g in generators:
        assert g @ g == SparseMatrix.identity(4)


@pytest.mark.parametrize("d,expected", [(1, 2), (2, 3), (3, 4)])
def test_double_centralizer_rank_two(d, expected):
    assert double_centralizer_check(2, d) == (expected, expected, True)


def test_singular_vectors_of_grassmannian():
    module = grassmannian_module(4, -1)
    assert singular_vectors(module).highest_weights() == [((2,), (4,))]
    assert singular_vectors(twist_by_theta(module)).highest_weights() == [((4,), (4,))]
    assert expected_highest_weights(3, 4) == ((2,), (4,))
    assert expected_highest_weights(3, 4, twisted=True) == ((4,), (4,))


def test_singular_vectors_of_rank_two_tensor_space():
    report = singular_vectors(tensor_module(2, 1))
    assert report.highest_weights() == [((0,), (-1,)), ((0,), (1,))]
    assert not report.findings
    assert report.to_json()["highest_weights"] == [[[0], [-1]], [[0], [1]]]


def test_expected_highest_weights_even_rank():
    assert expected_highest_weights(4, 4) == ((2, 0), (2, 0))
    assert expected_highest_weights(4, 4, twisted=True) == ((2, 0), (-2, 2))


def test_t_element():
    assert t_element_matrix(4, -1).get(0, 0) == 2
    assert t_target_polynomial(2) == (0, -4, 0, 1)
    report = t_element_report(4, -1)
    assert report["passed"]
    assert report["weight_space_exact"]
    assert report["weight_space_dimension"] == 4
    assert t_min_poly_check(5, 1)
    assert t_weight_space_matrix(0).is_zero()


def test_t_on_weight_space_swaps_outer_letters():
    assert t_weight_space_matrix(1) == SparseMatrix.from_rows([[0, 1], [1, 0]])
    assert t_weight_space_matrix(2).shape == (4, 4)
    assert minimal_polynomial(t_weight_space_matrix(3)) == t_target_polynomial(3)
    with pytest.raises(ValueError):
        t_weight_space_matrix(-1)


def test_faithfulness_polynomial_closed_forms():
    assert faithfulness_polynomial(0, 1, 0)(3, 5) == 4
    assert faithfulness_polynomial(1, 0, 0)(1, 4) == 8
    assert faithfulness_polynomial(1, 1, 1)(2, 3) == 4 * 2 * 2 * 2


def test_monomial_action_outside_range_is_zero():
    assert monomial_action(1, 0, 0, 0, 3) == 0
    assert monomial_action(0, 1, 0, 3, 3) == 0
    assert monomial_action(0, 1, 0, 2, 3) == 3


@pytest.mark.parametrize("a,b,c,v,eps", [(1, 1, 1, 6, -1), (2, 1, 0, 5, 1), (0, 3, 2, 8, 1), (3, 2, 1, 10, -1)])
def test_faithfulness_matches_module(a, b, c, v, eps):
    assert faithfulness_consistency(a, b, c, v, eps)


def test_faithfulness_report():
    report = faithfulness_report([(1, 1, 0), (0, 0, 0)])
    assert report["independent"]
    assert report["mode"] == "level"
    assert report["d_used"] == 3
    assert faithfulness_check([(0, 1, 1), (1, 2, 1)])


def test_faithfulness_report_level_residue():
    report = faithfulness_report([(1, 1, 0), (0, 0, 0)], max_level=2, residue=2)
    assert report["independent"]
    assert report["d_used"] == 1


def test_faithfulness_in_one_weight_class_needs_more_levels():
    # the class of (0,2,0) meets the rank-one modules at (y, d) = (0, 1), (2, 4), ...
    family = [(1, 1, 0), (0, 0, 0)]
    short = faithfulness_report(family, max_level=6, weight=(0, 2, 0))
    assert short["mode"] == "class"
    assert not short["independent"]
    assert short["rank"] == 1
    assert faithfulness_report(family, max_level=6, residue=2)["independent"]
    report = faithfulness_report(family, max_level=8, weight=(2, 4, 2))
    assert report["independent"]
    assert report["weight"] == [0, 2, 0]
    assert report["d_used"] == 4


def test_faithfulness_rejects_bad_families():
    with pytest.raises(ValueError):
        faithfulness_report([])
    with pytest.raises(ValueError):
        faithfulness_report([(1, 0, 0), (0, 0, 0)])
    with pytest.raises(ValueError):
        faithfulness_report([(1, 1, 0), (1, 1, 0)])
    with pytest.raises(ValueError):
        faithfulness_report([(1, 1, 0), (0, 0, 0)], residue=3)


def test_basis_proxy_rank_two():
    report = basis_proxy_check(2, max_entry=2, max_degree=3)
    assert report["independent"]
    assert report["module_dimension"] == 14
    assert all(group["rank"] == group["size"] for group in report["groups"])


def test_basis_proxy_keeps_margins_inside_the_proxy():
    report = basis_proxy_check(3, max_entry=1, max_degree=2)
    present = {weight_class(w) for d in (1, 2) for w in tensor_module(3, d).weights}
    assert report["groups"]
    for group in report["groups"]:
        assert tuple(group["co"]) in present and tuple(group["ro"]) in present
        assert sum(group["co"]) <= 4 and sum(group["ro"]) <= 4


def test_module_json_round_trip():
    module = nflag_module(4, 4, -1)
    loaded = load_module(dump_module(module))
    assert loaded.labels == module.labels
    assert loaded.weights == module.weights
    for i in range(1, 4):
        assert loaded.e_matrices[i] == module.e_matrices[i]


def test_parse_module_spec():
    assert parse_module_spec("nflag:n=4,v=4,eps=-1").dimension == 3
    assert parse_module_spec("tensor:n=2,d=3").dimension == 8
    with pytest.raises(ValueError):
        parse_module_spec("nflag:n=4,v=4")
    with pytest.raises(ValueError):
        parse_module_spec("tensor:n=2,d=1,x=3")
    with pytest.raises(ValueError):
        parse_module_spec("spin:n=2")


def test_fraction_entries_survive_dump():
    module = grassmannian_module(2, 1)
    data = dump_module(module)
    assert Fraction(data["e"]["1"][0][2]) == 1
