"""Normal-ordered enveloping-algebra arithmetic and its truncation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from osptwist.algebra import build_osp
from osptwist.pbw import (
    UEElement,
    UETensor,
    normal_form,
    monomial_g2,
    monomial_parity,
    ue_exp,
    ue_log,
    ue_invert,
    ue_sqrt,
    ad_exp,
)
from osptwist.errors import (
    ConstantTermPresent,
    HeterogeneousOperand,
    MixedAlgebra,
)


ALG = build_osp(2)
CAP = 8

IDX = {name: ALG.generator_index(name) for name in
       ("H", "J", "Z+", "Y+", "U+", "X+", "w+", "v+", "X-", "v-", "w-")}


def gen(name, cap=CAP):
    return UEElement.generator(ALG, name, g2cap=cap)


# -- normal form ---------------------------------------------------------------


def test_normal_form_sorts_and_corrects():
    # X- X+ = X+ X- - H   (indices: X+ before X- in the basis order)
    got = normal_form(ALG, (IDX["X-"], IDX["X+"]))
    assert got == {
        (IDX["X+"], IDX["X-"]): Fraction(1),
        (IDX["H"],): Fraction(-1),
    }


def test_normal_form_odd_swap():
    # v+ w+ = -w+ v+ + U+   (w+ precedes v+ in the basis order)
    got = normal_form(ALG, (IDX["v+"], IDX["w+"]))
    assert got == {
        (IDX["w+"], IDX["v+"]): Fraction(-1),
        (IDX["U+"],): Fraction(1),
    }
    # already ordered words pass through untouched
    assert normal_form(ALG, (IDX["w+"], IDX["v+"])) == {
        (IDX["w+"], IDX["v+"]): Fraction(1)
    }


def test_normal_form_odd_opposite_pair():
    # v- v+ = -v+ v- - H
    got = normal_form(ALG, (IDX["v-"], IDX["v+"]))
    assert got == {
        (IDX["v+"], IDX["v-"]): Fraction(-1),
        (IDX["H"],): Fraction(-1),
    }


def test_odd_square_collapses():
    # v+ v+ = X+ inside the enveloping algebra (the square of an odd
    # generator is half its self-bracket)
    v = gen("v+")
    x = gen("X+")
    assert v * v == x
    w = gen("w+")
    assert w * w == gen("Y+")


def test_monomial_grade_and_parity():
    mono = (IDX["v+"], IDX["w+"], IDX["X+"])
    assert monomial_g2(ALG, mono) == 1 + 1 + 2
    assert monomial_parity(ALG, mono) == 0
    assert monomial_parity(ALG, (IDX["v+"],)) == 1


# -- element arithmetic ----------------------------------------------------------


word_strategy = st.lists(
    st.sampled_from(list(IDX.values())), min_size=0, max_size=3
)


@given(word_strategy, word_strategy, word_strategy)
@settings(max_examples=40, deadline=None)
def test_product_associative(wa, wb, wc):
    def elem(w):
        out = UEElement.one(ALG, g2cap=CAP)
        for i in w:
            out = out * UEElement.generator(ALG, ALG.name_of(i), g2cap=CAP)
        return out

    a, b, c = elem(wa), elem(wb), elem(wc)
    assert (a * b) * c == a * (b * c)


@given(word_strategy, word_strategy)
@settings(max_examples=40, deadline=None)
def test_super_bracket_matches_structure_constants(wa, wb):
    if len(wa) != 1 or len(wb) != 1:
        return
    i, j = wa[0], wb[0]
    a = UEElement.generator(ALG, ALG.name_of(i), g2cap=CAP)
    b = UEElement.generator(ALG, ALG.name_of(j), g2cap=CAP)
    want = UEElement.zero(ALG, g2cap=CAP)
    for k, c in ALG.bracket(i, j).items():
        want = want + UEElement.generator(ALG, ALG.name_of(k), g2cap=CAP).scale(c)
    assert a.super_bracket(b) == want


def test_truncation_drops_high_grades():
    x = gen("X+", cap=4)
    cube = x * x * x  # grade 6 exceeds the cap
    assert cube.is_zero
    assert not (x * x).is_zero


def test_truncate_method():
    x = gen("X+")
    s = UEElement.one(ALG, g2cap=CAP) + x + x * x
    t = s.truncate(2)
    assert t.coefficient((IDX["X+"],)) == 1
    assert t.coefficient((IDX["X+"], IDX["X+"])) == 0


def test_mixed_algebra_rejected():
    other = UEElement.generator(build_osp(3), "+2e1", g2cap=4)
    with pytest.raises(MixedAlgebra):
        gen("X+", cap=4) + other


def test_to_matrix_is_multiplicative():
    a = gen("v+") * gen("Z+") + 2 * gen("H")
    b = gen("w+") - gen("U+") * Fraction(1, 3)
    assert (a * b).to_matrix() == a.to_matrix() @ b.to_matrix()
    assert (a + b).to_matrix() == a.to_matrix() + b.to_matrix()


# -- coproduct and tensors --------------------------------------------------------


def test_coproduct_primitive_on_generators():
    h = gen("H")
    d = h.coproduct()
    one = UEElement.one(ALG, g2cap=CAP)
    want = UETensor.of(h, one, g2cap=CAP) + UETensor.of(one, h, g2cap=CAP)
    assert d == want


def test_coproduct_is_homomorphism():
    for na, nb in (("v+", "w+"), ("H", "X+"), ("Z+", "v+"), ("v+", "v+")):
        a, b = gen(na), gen(nb)
        assert (a * b).coproduct() == a.coproduct() * b.coproduct(), (na, nb)


def test_coproduct_counit_axiom():
    x = gen("v+") * gen("U+") + gen("H") * gen("H")
    d = x.coproduct()
    assert d.counit_leg(1) == x
    assert d.counit_leg(2) == x


def test_coproduct_coassociative():
    x = gen("v+") * gen("w+")
    d = x.coproduct()
    assert d.coproduct_leg(1) == d.coproduct_leg(2) == x.coproduct(legs=3)


def test_tensor_flip_koszul_sign():
    v, w = gen("v+"), gen("w+")
    t = UETensor.of(v, w, g2cap=CAP)
    # odd (x) odd picks up a minus under the graded flip
    assert t.flip() == -UETensor.of(w, v, g2cap=CAP)
    h, x = gen("H"), gen("X+")
    assert UETensor.of(h, x, g2cap=CAP).flip() == UETensor.of(x, h, g2cap=CAP)
    assert t.flip().flip() == t


def test_tensor_product_koszul_sign():
    """(1 (x) v)(w (x) 1) = -(w (x) v) for odd v, w."""
    v, w = gen("v+"), gen("w+")
    one = UEElement.one(ALG, g2cap=CAP)
    lhs = UETensor.of(one, v, g2cap=CAP) * UETensor.of(w, one, g2cap=CAP)
    assert lhs == -UETensor.of(w, v, g2cap=CAP)
    # and with an even first slot there is no sign
    h = gen("H")
    lhs2 = UETensor.of(one, h, g2cap=CAP) * UETensor.of(w, one, g2cap=CAP)
    assert lhs2 == UETensor.of(w, h, g2cap=CAP)


def test_tensor_embed_into_three_legs():
    v, w = gen("v+"), gen("w+")
    t = UETensor.of(v, w, g2cap=CAP)
    one = UEElement.one(ALG, g2cap=CAP)
    t13 = t.embed((1, 3), 3)
    assert t13 == UETensor.of(v, one, w, g2cap=CAP)
    t23 = t.embed((2, 3), 3)
    assert t23 == UETensor.of(one, v, w, g2cap=CAP)


def test_tensor_leg_mismatch_rejected():
    t2 = UETensor.of(gen("H"), gen("H"), g2cap=CAP)
    t3 = UETensor.of(gen("H"), gen("H"), gen("H"), g2cap=CAP)
    with pytest.raises(HeterogeneousOperand):
        t2 + t3


def test_tensor_grade_component_and_scaling():
    h, x = gen("H"), gen("X+")
    t = UETensor.of(h, x, g2cap=CAP) + UETensor.of(x, x, g2cap=CAP)
    assert t.grade_component(2) == UETensor.of(h, x, g2cap=CAP)
    assert t.grade_component(4) == UETensor.of(x, x, g2cap=CAP)
    # the factor is raised to half the doubled grade of each term
    scaled = t.scale_by_grade(Fraction(3))
    assert scaled.grade_component(2) == UETensor.of(h, x, g2cap=CAP).scale(3)
    assert scaled.grade_component(4) == UETensor.of(x, x, g2cap=CAP).scale(9)


def test_tensor_to_matrix_is_multiplicative():
    v, w = gen("v+", 4), gen("w+", 4)
    a = UETensor.of(v, w, g2cap=4)
    b = UETensor.of(w, v, g2cap=4)
    assert (a * b).to_matrix() == a.to_matrix() @ b.to_matrix()


# -- series functions -------------------------------------------------------------


def test_exp_log_roundtrip():
    x = gen("X+") + gen("v+") * gen("w+")
    assert ue_log(ue_exp(x)) == x
    assert ue_exp(x) * ue_exp(-x) == UEElement.one(ALG, g2cap=CAP)


def test_exp_of_sum_of_commuting_terms_factorizes():
    x, y = gen("X+"), gen("Y+")  # the two long roots commute
    assert x.super_bracket(y).is_zero
    assert ue_exp(x + y) == ue_exp(x) * ue_exp(y)


def test_invert_and_sqrt():
    one = UEElement.one(ALG, g2cap=CAP)
    u = one + gen("X+") + gen("Z+") * gen("v+")
    assert u * ue_invert(u) == one
    assert ue_invert(u) * u == one
    s = ue_sqrt(u)
    assert s * s == u


def test_series_require_unit_constant_term():
    with pytest.raises(ConstantTermPresent):
        ue_log(gen("X+"))  # constant term 0, not 1
    x_plus_two = UEElement.one(ALG, g2cap=CAP).scale(2) + gen("X+")
    with pytest.raises(ConstantTermPresent):
        ue_exp(x_plus_two)


def test_ad_exp_matches_explicit_conjugation():
    a = gen("X+")
    y = gen("Z+")
    e = ue_exp(a)
    assert ad_exp(a, y) == e * y * ue_invert(e)
    # nilpotency makes the adjoint series finite: [X+, [X+, Z+]] = 0
    h = gen("H")
    assert ad_exp(a, h) == ue_exp(a) * h * ue_invert(e)


def test_exp_on_tensor_legs():
    h, x = gen("H"), gen("X+")
    t = UETensor.of(h, x, g2cap=CAP)
    e = ue_exp(t)
    assert e.counit_leg(2) == UEElement.one(ALG, g2cap=CAP)
