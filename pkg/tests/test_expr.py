"""Expression tree: parsing, printing, evaluation, differentiation."""

import math

import pytest

from alphacut.cutcore import expr as ex
from alphacut.errors import ParseError

from oracles import richardson_one_sided


GRAMMAR_SAMPLES = [
    "1 - a^2",
    "sqrt(1 - a)",
    "0.5 - (a + 1.5707963267948966)^2",
    "asin(4*a - 3) + 2*a - 1",
    "0.3*acos(4*a - 3)",
    "cos(2*a) * (1 - a)",
    "sin(a)^2 + 1",
    "-(a - 1)",
    "2*a - 1",
    "a^3",
    "(1 - a)^3*0.25",
]


@pytest.mark.parametrize("text", GRAMMAR_SAMPLES)
def test_parse_print_round_trip(text):
    e = ex.parse(text)
    printed = ex.to_text(e, "a")
    again = ex.parse(printed)
    for k in range(21):
        t = 0.02 + 0.96 * k / 20.0
        assert ex.evaluate(e, t) == ex.evaluate(again, t)


@pytest.mark.parametrize("text", GRAMMAR_SAMPLES)
def test_symbolic_derivative_matches_central_difference(text):
    e = ex.parse(text)
    d = ex.derivative(e)
    h = 1e-6
    for k in range(9):
        t = 0.1 + 0.8 * k / 8.0
        want = (ex.evaluate(e, t + h) - ex.evaluate(e, t - h)) / (2 * h)
        got = ex.evaluate(d, t)
        assert abs(got - want) <= 1e-6 * (1.0 + abs(got))


def test_evaluation_values():
    assert ex.evaluate(ex.parse("1 - a^2"), 0.5) == 0.75
    assert ex.evaluate(ex.parse("sqrt(1 - a)"), 0.75) == 0.5
    assert ex.evaluate(ex.parse("2*a - 1"), 0.25) == -0.5
    assert ex.evaluate(ex.parse("acos(2*a - 1)"), 0.0) == math.pi
    assert ex.evaluate(ex.parse("asin(2*a - 1)"), 1.0) == math.pi / 2


def test_domain_edges_are_clamped():
    # 1-ulp overshoot outside sqrt/acos domains must not produce NaN
    e = ex.parse("sqrt(1 - a)")
    above = 1.0 + 2.220446049250313e-16
    assert ex.evaluate(e, above) == 0.0
    f = ex.parse("acos(a)")
    assert ex.evaluate(f, above) == 0.0
    g = ex.parse("asin(-a)")
    assert ex.evaluate(g, above) == -math.pi / 2


def test_exact_addition():
    a = ex.parse("1 - a^2")
    b = ex.parse("sqrt(1 - a)")
    s = ex.add(a, b)
    for k in range(11):
        t = k / 10.0
        assert ex.evaluate(s, t) == ex.evaluate(a, t) + ex.evaluate(b, t)


def test_scalar_helpers():
    e = ex.parse("a")
    assert ex.evaluate(ex.scal(3.0, e), 2.0) == 6.0
    assert ex.evaluate(ex.neg(e), 2.0) == -2.0
    assert ex.evaluate(ex.sub(ex.const(1.0), e), 0.25) == 0.75
    assert ex.evaluate(ex.mul(e, e), 3.0) == 9.0


def test_rational_power_rules():
    e = ex.parse("a")
    # even/2 reduces to an integer power
    sq = ex.rpow(e, 2, 2)
    assert sq.kind in ("var", "rpow", "mul")
    assert ex.evaluate(sq, 3.0) == 3.0
    half = ex.rpow(e, 1, 2)
    assert ex.evaluate(half, 4.0) == 2.0
    assert ex.evaluate(ex.rpow(e, 3, 2), 4.0) == 8.0
    with pytest.raises(ParseError):
        ex.rpow(e, 1, 3)


def test_power_zero_base_negative_exponent_is_infinite():
    d = ex.derivative(ex.parse("sqrt(a)"))
    assert ex.evaluate(d, 0.0) == math.inf


def test_parse_errors_carry_position():
    for bad in ["1 +", "sqrt(", "a^b", "foo(a)", "1..2", "a^(1/3)", ")", ""]:
        with pytest.raises(ParseError):
            ex.parse(bad)


def test_parse_error_names_the_bad_token():
    try:
        ex.parse("1 + @")
    except ParseError as err:
        assert "@" in str(err)
    else:
        raise AssertionError("expected a parse error")


def test_substitute():
    e = ex.parse("1 - a^2")
    inner = ex.parse("2*a")
    composed = ex.substitute(e, inner)
    for k in range(6):
        t = k / 10.0
        assert composed is not None
        assert ex.evaluate(composed, t) == 1.0 - (2.0 * t) ** 2


def test_poly_coeffs_affine():
    c = ex.poly_coeffs(ex.parse("3*a - 2"))
    assert c is not None
    assert c[0] == -2.0 and c[1] == 3.0
    assert ex.poly_coeffs(ex.parse("sin(a)")) is None


def test_is_affine():
    assert ex.is_affine(ex.parse("2*a + 1"))
    assert not ex.is_affine(ex.parse("a^2"))


def test_one_sided_derivative_oracle_agrees():
    e = ex.parse("0.3*acos(4*a - 3)")
    d = ex.derivative(e)
    f = lambda t: ex.evaluate(e, t)
    got = ex.evaluate(d, 0.8)
    want = richardson_one_sided(f, 0.8, "right", h0=1e-4)
    assert abs(got - want) <= 1e-5 * (1 + abs(got))
