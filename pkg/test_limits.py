#!/usr/bin/env python3
"""
Test transfer maps and limit generator families
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indexing import ThetaMatrix, enumerate_theta, shift_class
from limits import (ZERO_SYMBOL, LimitElement, coherence_check, coherence_report, convolution_sign, corrupted_family,
                    label_operator, limit_generator, limit_label, residue_of, spectral_transfer_check,
                    spectral_transfer_report, transfer_2n, transfer_n, truncation_operator)
from modules import grassmannian_module, nflag_module


def test_transfer_2n_examples():
    assert transfer_2n(ThetaMatrix.from_rows([[2, 1], [1, 2]])) == ThetaMatrix.from_rows([[0, 1], [1, 0]])
    assert transfer_2n(ThetaMatrix.from_rows([[0, 1], [1, 0]])) is ZERO_SYMBOL


def test_transfer_n_variants():
    assert transfer_n(ThetaMatrix.diagonal([1, 1, 1]), "odd-orthogonal") == ThetaMatrix.diagonal([0, 0, 0])
    assert transfer_n(ThetaMatrix.diagonal([0, 2, 0]), "odd-orthogonal") is ZERO_SYMBOL
    with pytest.raises(ValueError):
        transfer_n(ThetaMatrix.diagonal([1, 1]), "odd-orthogonal")
    with pytest.raises(ValueError):
        transfer_n(ThetaMatrix.diagonal([1, 1, 1]), "symplectic-even")
    with pytest.raises(ValueError):
        transfer_n(ThetaMatrix.diagonal([1, 1, 1]), "block")


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(enumerate_theta(3, 4)))
def test_transfer_undoes_padding(a):
    assert transfer_2n(shift_class(a, 1)) == a


def test_residues_and_limit_labels():
    assert residue_of(8, 2) == 4
    assert residue_of(5, 2) == 1
    a = ThetaMatrix.from_rows([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    label, residue = limit_label(shift_class(a, 3), 24, -1)
    assert label == a
    assert residue == 6
    with pytest.raises(ValueError):
        limit_label(a, 3, -1)


def test_generator_validation():
    with pytest.raises(ValueError):
        limit_generator("e", 1, 3, 3, -1)
    with pytest.raises(ValueError):
        limit_generator("x", 1, 3, 4, -1)
    with pytest.raises(ValueError):
        limit_generator("e", 3, 3, 4, -1)
    with pytest.raises(ValueError):
        limit_generator("idem", 0, 3, 4, -1)
    with pytest.raises(ValueError):
        limit_generator("idem", 0, 3, 4, -1, weight=(0, 1, 2))


def test_levels_and_truncate_guard():
    x = limit_generator("e", 1, 3, 4, -1)
    assert x.levels() == [4, 10, 16]
    with pytest.raises(ValueError):
        x.truncate(6)


def test_raising_family_at_level_four():
    x = limit_generator("e", 1, 3, 4, -1)
    assert x.truncate(4) == {
        ThetaMatrix.from_rows([[0, 1, 0], [0, 2, 0], [0, 1, 0]], 4): Fraction(1),
        ThetaMatrix.from_rows([[1, 1, 0], [0, 0, 0], [0, 1, 1]], 4): Fraction(-1),
    }


def test_cartan_family_at_level_four():
    x = limit_generator("h", 1, 3, 4, -1)
    assert x.truncate(4) == {
        ThetaMatrix.diagonal([0, 4, 0], 4): Fraction(-4),
        ThetaMatrix.diagonal([1, 2, 1], 4): Fraction(-1),
        ThetaMatrix.diagonal([2, 0, 2], 4): Fraction(2),
    }


def test_idempotent_family():
    x = limit_generator("idem", 0, 3, 4, -1, weight=(0, 4, 0))
    assert x.truncate(4) == {ThetaMatrix.diagonal([0, 4, 0], 4): Fraction(1)}
    assert x.truncate(10) == {ThetaMatrix.diagonal([2, 6, 2], 10): Fraction(1)}
    assert x.name == "1_[0, 4, 0]"


@pytest.mark.parametrize("n,eps,residue", [(2, -1, 4), (3, -1, 4), (3, 1, 5), (4, 1, 2), (4, -1, 8)])
def test_generator_families_are_coherent(n, eps, residue):
    for kind in ("e", "f", "h"):
        for i in range(1, n):
            family = limit_generator(kind, i, n, residue, eps)
            for v in family.levels(2):
                assert coherence_check(family, v), (family.name, v)


def test_coherence_report_and_corruption():
    family = limit_generator("e", 1, 3, 4, -1)
    report = coherence_report(family, 2)
    assert report["passed"]
    assert [item["v"] for item in report["levels"]] == [4, 10]
    corrupted = corrupted_family(family)
    assert not all(coherence_check(corrupted, v) for v in corrupted.levels())


@pytest.mark.parametrize("kind,i,token", [("e", 1, ("e", 1)), ("h", 1, ("h", 1)), ("f", 1, ("e", 2))])
def test_truncations_act_like_rank_one_generators(kind, i, token):
    module = grassmannian_module(4, -1)
    family = limit_generator(kind, i, 3, 4, -1)
    operator = truncation_operator(family, 4, module)
    table = module.e_matrices if token[0] == "e" else module.h_matrices
    assert operator == table[token[1]]


def test_sign_flipped_family_is_not_a_generator():
    module = grassmannian_module(4, -1)
    family = limit_generator("e", 1, 3, 4, -1)
    flipped = LimitElement(family.kind, family.index, family.n, family.eps, family.residue_v,
                           lambda v: {a: -c for a, c in family.truncate(v).items()})
    operator = truncation_operator(flipped, 4, module)
    assert operator != module.e_matrices[1]
    assert operator == -module.e_matrices[1]


def test_convolution_sign_reads_the_pivot_entry():
    assert convolution_sign(ThetaMatrix.from_rows([[0, 1, 0], [0, 2, 0], [0, 1, 0]], 4), "e", 1, 4, -1) == 1
    assert convolution_sign(ThetaMatrix.from_rows([[1, 1, 0], [0, 0, 0], [0, 1, 1]], 4), "e", 1, 4, -1) == -1
    # middle pivot: isotropic lines in a 4 dimensional piece
    assert convolution_sign(ThetaMatrix.from_rows([[0, 0, 0], [1, 2, 1], [0, 0, 0]], 4), "f", 1, 4, -1) == -1
    with pytest.raises(ValueError):
        convolution_sign(ThetaMatrix.diagonal([1, 1, 1, 1]), "e", 2, 4, 1)


@pytest.mark.parametrize("n,eps,residue", [(3, -1, 4), (3, 1, 5), (5, 1, 3), (4, 1, 2), (5, -1, 6)])
def test_convolution_sign_matches_family_coefficients(n, eps, residue):
    for kind in ("e", "f"):
        for i in range(1, n):
            if n % 2 == 0 and i == n // 2:
                continue
            family = limit_generator(kind, i, n, residue, eps)
            for v in family.levels(2):
                for a, c in family.truncate(v).items():
                    if a.is_diagonal():
                        continue
                    assert convolution_sign(a, kind, i, v, eps) == (1 if c > 0 else -1), (family.name, v, a)


def test_truncation_of_middle_even_generator_is_refused():
    family = limit_generator("e", 2, 4, 4, -1)
    with pytest.raises(ValueError):
        truncation_operator(family, 4, nflag_module(4, 4, -1))


def test_label_operator_uses_row_margin():
    module = grassmannian_module(4, -1)
    a = ThetaMatrix.from_rows([[1, 1, 0], [0, 0, 0], [0, 1, 1]], 4)
    operator = label_operator(a, 1, -1, module)
    assert dict(operator.items()) == {(2, 1): -2}


def test_limit_element_json():
    data = limit_generator("h", 1, 3, 4, -1).to_json(horizon=2)
    assert sorted(data["levels"]) == ["10", "4"]
    assert data["levels"]["4"][0] == {"label": [[0, 0, 0], [0, 4, 0], [0, 0, 0]], "coeff": "-4"}


def test_spectral_transfer():
    report = spectral_transfer_report(6, -1)
    assert report["passed"]
    assert report["spectrum"] == ["-3", "-1", "1", "3"]
    assert report["two_step_leftover"] == ["-3", "3"]
    assert spectral_transfer_check(4, 1)
    with pytest.raises(ValueError):
        spectral_transfer_report(2, 1)
