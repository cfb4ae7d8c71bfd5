from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obtusity.exact import (PUBLISHED_DECIMALS, PUBLISHED_VALUES, ClosedFormValue, Const, catalan, cf_eval,
                            cf_sum_config, config_closed_form, published_value)
from obtusity.geometry import CONFIG_PARTS

ETA_C3_50 = "0.54265928142722907450111187258177267165716732602495"


def test_catalan_examples():
    assert str(catalan(10)) == "0.9159655941"
    assert str(catalan(1)) == "0.9"
    assert str(catalan(50))[:32] == str(catalan(30))


def test_catalan_against_mpmath():
    with mpmath.workdps(120):
        ref = mpmath.nstr(+mpmath.catalan, 110, strip_zeros=False)
    assert ref.startswith(str(catalan(100)))


@pytest.mark.parametrize("sym", list(Const), ids=lambda s: s.name)
def test_constants_refine_monotonically(sym):
    lo = cf_eval(ClosedFormValue({sym: 1}), 20)
    hi = cf_eval(ClosedFormValue({sym: 1}), 40)
    assert str(hi).startswith(str(lo)[:-1])


def test_cf_eval_examples():
    assert str(cf_eval(published_value("eta_C3"), 50)) == ETA_C3_50
    assert str(cf_eval(ClosedFormValue({Const.ONE: Fraction(97, 150), Const.PI: Fraction(1, 40)}), 4)) == "0.7252"
    assert cf_eval(ClosedFormValue(), 5) == 0
    with pytest.raises(ValueError):
        cf_eval(ClosedFormValue(), 0)


def test_rounding_modes():
    third = ClosedFormValue({Const.ONE: Fraction(2, 3)})
    assert str(cf_eval(third, 3)) == "0.666"
    assert str(cf_eval(third, 3, rounding="nearest")) == "0.667"
    neg = ClosedFormValue({Const.ONE: Fraction(-2, 3)})
    assert cf_eval(neg, 3) == Decimal("-0.666")


def test_published_value_examples():
    assert published_value("321*r") == ClosedFormValue({Const.ONE: Fraction(43, 14700)})
    assert published_value("32*0") == ClosedFormValue({Const.ONE: Fraction(23, 450)})
    assert published_value("eta_ball") == ClosedFormValue({Const.ONE: Fraction(37, 70)})
    with pytest.raises(KeyError):
        published_value("eta_tetrahedron")


def test_sum_config_examples():
    v = published_value
    assert cf_sum_config(v("3*22r"), v("32*2r"), v("32*2r")) == v("322r")
    assert cf_sum_config(v("3*21r"), v("32*1r"), v("321*r")) == v("321r")
    assert v("3*22r") + ClosedFormValue() == v("3*22r")


@pytest.mark.parametrize("label", list(CONFIG_PARTS))
def test_configuration_sums_are_consistent(label):
    assert config_closed_form(label) == published_value(label)


@pytest.mark.parametrize("id", sorted(PUBLISHED_DECIMALS))
def test_published_decimals(id):
    printed = PUBLISHED_DECIMALS[id]
    digits = len(printed.split(".")[1])
    v = published_value(id)
    assert printed in (str(cf_eval(v, digits)), str(cf_eval(v, digits, rounding="nearest")))


def test_zero_coefficients_dropped():
    v = ClosedFormValue({Const.PI: 0, Const.ONE: Fraction(1, 2)})
    assert v.terms == {Const.ONE: Fraction(1, 2)}
    assert not (v - v)


def test_text_form():
    assert str(published_value("eta_disk")) == "9/8 - 4/pi^2"
    assert str(published_value("eta_square")) == "97/150 + (1/40)*pi"
    assert str(ClosedFormValue()) == "0"


def test_json_round_trip_of_published_values():
    for v in PUBLISHED_VALUES.values():
        assert ClosedFormValue.from_json(v.to_json()) == v
    assert published_value("eta_disk").to_json() == {"ONE": "9/8", "INV_PI_SQUARED": "-4/1"}


# --- algebra properties -------------------------------------------------------

small_q = st.fractions(min_value=-50, max_value=50, max_denominator=60)
values = st.dictionaries(st.sampled_from(list(Const)), small_q, max_size=5).map(ClosedFormValue)


@settings(max_examples=200, deadline=None)
@given(values, values, values)
def test_addition_associative_commutative(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a - a == ClosedFormValue()


@settings(max_examples=200, deadline=None)
@given(small_q, values, values)
def test_scaling_distributes(r, a, b):
    assert r * (a + b) == r * a + r * b
    assert hash(r * a + r * b) == hash(r * (a + b))


@settings(max_examples=50, deadline=None)
@given(values, values)
def test_evaluation_is_linear(a, b):
    lhs = cf_eval(a + b, 30, rounding="nearest")
    with localcontext() as ctx:
        ctx.prec = 80
        rhs = cf_eval(a, 35, rounding="nearest") + cf_eval(b, 35, rounding="nearest")
        assert abs(lhs - rhs) <= Decimal("1e-29")


@settings(max_examples=100, deadline=None)
@given(values)
def test_json_round_trip(a):
    assert ClosedFormValue.from_json(a.to_json()) == a
