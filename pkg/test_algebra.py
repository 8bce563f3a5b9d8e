#!/usr/bin/env python3
"""
Test generator words, relators and their evaluation on modules
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra import (AlgebraElement, GenToken, bracket, cartan_entry, cartan_hprime, chain_element,
                     commuting_cartan_check, e, evaluate, expand_hprime, f, h, hprime, idem, idempotent_checks,
                     monomial_m, one, relations_check, serre_relators, theta_involution, to_e_form)
from exactnum import SparseMatrix
from indexing import ThetaMatrix
from modules import grassmannian_module, nflag_module, rectified_module, tensor_module


def test_gen_token_validation():
    assert GenToken("idem", 0, (2, 4, 2)).weight == (0, 2, 0)
    assert GenToken("e", 2).name() == "e2"
    with pytest.raises(ValueError):
        GenToken("x", 1)
    with pytest.raises(ValueError):
        GenToken("e", 0)


def test_tokens_are_checked_against_rank():
    with pytest.raises(ValueError):
        e(3, 3)
    with pytest.raises(ValueError):
        hprime(2, 3)
    with pytest.raises(ValueError):
        idem((0, 0), 3)


def test_arithmetic_cancels():
    x = e(1, 3) + e(1, 3)
    assert (x - e(1, 3).scale(2)).is_formally_zero()
    assert bracket(h(1, 3), h(1, 3)).is_formally_zero()
    assert (e(1, 3) ** 0).terms == one(3).terms


def test_rank_mismatch():
    with pytest.raises(ValueError):
        e(1, 3) + e(1, 4)


def test_json_round_trip_of_element():
    x = e(1, 3) * f(2, 3).scale(Fraction(1, 2)) + idem((0, 2, 0), 3)
    assert AlgebraElement.from_json(3, x.to_json()).terms == x.terms


def test_to_e_form_rewrites_f():
    assert to_e_form(f(1, 3)).terms == e(2, 3).terms
    assert to_e_form(f(2, 4)).terms == e(2, 4).terms


def test_cartan_hprime():
    assert cartan_hprime(2)[0].terms == e(1, 2).terms
    assert cartan_hprime(3)[0].terms == bracket(e(1, 3), f(1, 3)).terms
    assert len(cartan_hprime(5)) == 2
    assert not any(t.kind == "hprime" for t in expand_hprime(hprime(1, 3) * e(1, 3)).tokens())


def test_theta_involution_is_an_involution():
    x = e(1, 3) * h(2, 3) + idem((0, 2, 0), 3)
    image = theta_involution(x)
    assert image.terms == (f(1, 3) * h(2, 3).scale(-1) + idem((2, 0, 2), 3)).terms
    assert theta_involution(image).terms == x.terms


def test_cartan_entry():
    assert cartan_entry(2, 2) == 2
    assert cartan_entry(1, 2) == -1
    assert cartan_entry(1, 3) == 0


def test_serre_relators_for_n3():
    relators = serre_relators(3)
    tags = [relator.case_tag for relator in relators]
    assert len(relators) == 8
    assert tags.count("h-e") == 4
    assert tags.count("serre-nonhomogeneous") == 2
    assert "e-e" not in tags


def test_serre_relators_for_n4_include_commuting_pairs():
    relators = serre_relators(4)
    described = {relator.describe() for relator in relators}
    assert "e-e(1, 3)" in described
    assert "serre-nonhomogeneous(2, 1)" in described
    assert "serre(1, 2)" in described


def test_evaluate_rejects_rank_mismatch():
    with pytest.raises(ValueError):
        evaluate(e(1, 4), grassmannian_module(4, -1))


def test_evaluate_composes_right_to_left():
    module = grassmannian_module(4, -1)
    # f then e on Gr_1: f Gr_1 = 4 Gr_0, e Gr_0 = Gr_1
    assert evaluate(e(1, 3) * f(1, 3), module).get(1, 1) == 4
    assert evaluate(h(1, 3), module) == SparseMatrix.diagonal([-4, -1, 2])


@pytest.mark.parametrize("module", [
    grassmannian_module(2, 1),
    grassmannian_module(4, -1),
    grassmannian_module(5, 1),
    nflag_module(3, 3, 1),
    nflag_module(4, 4, -1),
    nflag_module(5, 2, -1),
    rectified_module(2, 3),
    tensor_module(3, 2),
    tensor_module(4, 2),
], ids=lambda m: m.name)
def test_relations_hold(module):
    report = relations_check(module.n, module)
    assert report["passed"], [entry for entry in report["relators"] if not entry["zero"]]
    assert report["failures"] == 0


@pytest.mark.parametrize("shift", [1, -1])
def test_shifted_serre_constant_fails(shift):
    module = grassmannian_module(4, 1)
    report = relations_check(3, module, constant_shift=shift)
    assert not report["passed"]
    broken = {entry["case"] for entry in report["relators"] if not entry["zero"]}
    assert broken == {"serre-nonhomogeneous"}
    assert all(entry["witness"] for entry in report["relators"] if not entry["zero"])


def test_idempotent_relations_on_tensor_space():
    report = idempotent_checks(tensor_module(3, 2))
    assert report["passed"], report["failures"]
    assert commuting_cartan_check(tensor_module(3, 2))


def test_monomial_m_word():
    x = monomial_m(1, 2, 0, (0, 4, 0))
    (word,) = x.terms
    assert [token.name() for token in word] == ["f1", "e1", "e1", "1[0,4,0]"]
    with pytest.raises(ValueError):
        monomial_m(-1, 0, 0, (0, 4, 0))


def test_chain_element_rank_two():
    a = ThetaMatrix.from_rows([[1, 1], [1, 1]])
    assert chain_element(a).terms == {(GenToken("f", 1), GenToken("idem", 0, (0, 0))): Fraction(1)}


tokens_of_rank_three = st.one_of(
    st.builds(GenToken, st.just("e"), st.integers(1, 2)),
    st.builds(GenToken, st.just("f"), st.integers(1, 2)),
    st.builds(GenToken, st.just("h"), st.integers(1, 2)),
    st.builds(lambda w: GenToken("idem", 0, w), st.sampled_from([(0, 4, 0), (1, 2, 1), (2, 0, 2), (1, 1, 1)])),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.lists(tokens_of_rank_three, max_size=4), st.integers(-3, 3)), max_size=4))
def test_theta_involution_squares_to_identity_on_random_words(items):
    terms = {}
    for word, coeff in items:
        terms[tuple(word)] = terms.get(tuple(word), 0) + coeff
    x = AlgebraElement(3, terms)
    assert theta_involution(theta_involution(x)).terms == x.terms
