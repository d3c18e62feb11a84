"""Exact scalar towers: multivariate polynomials and Laurent series."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from osptwist.scalars import (
    Poly,
    LaurentSeries,
    fraction_sqrt,
    taylor_exp,
    taylor_log1p,
    taylor_geometric,
    taylor_binomial,
)
from osptwist.errors import (
    ConstantTermPresent,
    DivisionByNonUnit,
    IrrationalExpansionPoint,
    NonInvertibleLeadingCoefficient,
)


fractions = st.fractions(
    min_value=-8, max_value=8, max_denominator=6
)


def small_polys(names=("a", "b")):
    """Polynomials with tiny support, enough to exercise the ring ops."""
    monos = st.tuples(
        st.sampled_from(names), st.integers(min_value=0, max_value=3)
    )
    term = st.tuples(monos, fractions)
    return st.lists(term, max_size=4).map(
        lambda ts: sum(
            (Poly.var(n, exponent=e, coefficient=c) for (n, e), c in ts),
            Poly.zero(),
        )
    )


# -- Poly ----------------------------------------------------------------------


def test_poly_constants_and_vars():
    assert Poly.zero().is_zero
    assert Poly.const(Fraction(3, 2)).as_fraction() == Fraction(3, 2)
    a = Poly.var("a")
    assert not a.is_constant
    assert str(a) == "a"
    assert (a - a).is_zero
    assert Poly.var("a", exponent=2, coefficient=3).coefficient("a", 2) == Poly.const(3)


def test_poly_arithmetic_known_values():
    a, b = Poly.var("a"), Poly.var("b")
    p = (a + b) * (a - b)
    assert p == a * a - b * b
    q = (a + 1) ** 3
    assert q.coefficient("a", 2).as_fraction() == 3
    assert q.constant_term == 1
    assert q.evaluate({"a": Fraction(1)}).as_fraction() == 8


def test_poly_coefficient_extraction_keeps_other_vars():
    a, b = Poly.var("a"), Poly.var("b")
    p = a * b + 2 * a + 5
    assert p.coefficient("a", 1) == b + 2
    assert p.coefficient("a", 0).as_fraction() == 5


def test_poly_monomial_unit_inverse():
    m = Poly.var("a", exponent=2, coefficient=Fraction(3, 4))
    minv = m.inverse()
    assert (m * minv).as_fraction() == 1
    with pytest.raises(DivisionByNonUnit):
        (Poly.var("a") + 1).inverse()
    with pytest.raises(DivisionByNonUnit):
        Poly.zero().inverse()


def test_poly_division_by_constant():
    a = Poly.var("a")
    assert (a * 6) / 3 == a * 2
    assert a / Fraction(1, 2) == a * 2


@given(small_polys(), small_polys(), small_polys())
@settings(max_examples=60, deadline=None)
def test_poly_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p + Poly.zero() == p
    assert p * Poly.const(1) == p


@given(small_polys())
@settings(max_examples=40, deadline=None)
def test_poly_evaluate_is_homomorphism(p):
    point = {"a": Fraction(2, 3), "b": Fraction(-1, 2)}
    q = p * p + 3 * p
    lhs = q.evaluate(point).as_fraction()
    v = p.evaluate(point).as_fraction()
    assert lhs == v * v + 3 * v


# -- LaurentSeries -------------------------------------------------------------


def t_series(order=8):
    return LaurentSeries.monomial("t", 1, order=order)


def test_series_basic_arithmetic():
    t = t_series()
    one = LaurentSeries.const("t", 1, order=8)
    s = (one + t) * (one - t)
    assert s == one - t * t
    assert s.coefficient(2) == -1
    assert s.coefficient(1) == 0


def test_series_valuation_and_shift():
    t = t_series()
    assert t.valuation == 1
    assert t.shift(-3).valuation == -2
    assert t.shift(2) == t * t * t


def test_series_geometric_inverse():
    one = LaurentSeries.const("t", 1, order=6)
    g = (one - t_series(6)).invert()
    for k in range(6):
        assert g.coefficient(k) == 1


def test_series_invert_with_pole():
    # 1/(t - t^2) = t^-1 * 1/(1-t) = t^-1 + 1 + t + ...
    t = t_series(6)
    s = (t - t * t).invert()
    assert s.valuation == -1
    assert s.coefficient(-1) == 1
    assert s.coefficient(0) == 1
    assert s.coefficient(1) == 1


def test_series_invert_zero_raises():
    with pytest.raises(NonInvertibleLeadingCoefficient):
        LaurentSeries.zero("t", order=4).invert()


def test_series_exp_log_roundtrip():
    t = t_series()
    x = t + t * t  # positive valuation, no constant term
    assert x.exp().log() == x.truncate(8)
    assert (x.exp() * (-x).exp()).truncate(8) == LaurentSeries.const(
        "t", 1, order=8
    ).truncate(8)


def test_series_exp_requires_no_constant_term():
    s = LaurentSeries.const("t", 1, order=8) + t_series()
    with pytest.raises(ConstantTermPresent):
        s.exp()
    with pytest.raises(ConstantTermPresent):
        t_series().log()  # log needs leading 1, not leading t


def test_series_from_poly_roundtrip():
    p = Poly.var("t", exponent=2, coefficient=5) + 7
    s = LaurentSeries.from_poly(p, "t", order=6)
    assert s.coefficient(0) == 7
    assert s.coefficient(2) == 5


@given(
    st.lists(fractions, min_size=1, max_size=4),
    st.lists(fractions, min_size=1, max_size=4),
)
@settings(max_examples=50, deadline=None)
def test_series_product_commutes(cs, ds):
    a = sum(
        (LaurentSeries.monomial("t", k, c, order=6) for k, c in enumerate(cs)),
        LaurentSeries.zero("t", order=6),
    )
    b = sum(
        (LaurentSeries.monomial("t", k, c, order=6) for k, c in enumerate(ds)),
        LaurentSeries.zero("t", order=6),
    )
    assert a * b == b * a
    assert (a + b) - b == a.truncate(6)


# -- helpers -------------------------------------------------------------------


def test_fraction_sqrt():
    assert fraction_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert fraction_sqrt(Fraction(0)) == 0
    assert fraction_sqrt(Fraction(2)) is None
    assert fraction_sqrt(Fraction(1, 3)) is None


def test_taylor_tables():
    assert taylor_exp(5) == [
        Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)
    ]
    # log(1+x) = x - x^2/2 + x^3/3 - ...
    assert taylor_log1p(4)[1:] == [Fraction(1), Fraction(-1, 2), Fraction(1, 3)]
    assert taylor_geometric(4) == [Fraction(1)] * 4 or taylor_geometric(4) == [
        Fraction(1), Fraction(-1), Fraction(1), Fraction(-1)
    ]
    # (1+x)^(1/2) = 1 + x/2 - x^2/8 + x^3/16 - ...
    assert taylor_binomial(Fraction(1, 2), 4) == [
        Fraction(1), Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)
    ]


def test_taylor_binomial_rejects_irrational_point():
    with pytest.raises(IrrationalExpansionPoint):
        taylor_binomial("half", 4)
