import math
from decimal import Decimal
from fractions import Fraction

import pytest

from logint.closed_forms import dk_pi2_ln2
from logint.kernel import (
    LN,
    LN2,
    PI2_EXPR,
    LogPolyExpr,
    Pi2Coeff,
    a1_pow,
    a_pow,
    equivalent,
    lemma_derivative,
    parse,
    render,
)
from logint.oracles import central_difference, lemma_fd


def test_derivative_of_reciprocal_linear():
    assert a1_pow(-1).differentiate() == a1_pow(-2) * -1
    assert a1_pow(-1).differentiate(4) == a1_pow(-5) * 24


def test_third_derivative_of_pi2_plus_ln2():
    d3 = (PI2_EXPR + LN2).differentiate(3)
    # 2(-1)^3 2! a^-3 (H_2 - ln a) = -6 a^-3 + 4 a^-3 ln a
    expected = a_pow(-3) * -6 + (LN * 4).shift(pow_a=-3)
    assert d3 == expected
    assert d3 == dk_pi2_ln2(3)


def test_dk_small_orders():
    assert dk_pi2_ln2(1) == (LN * 2).shift(pow_a=-1)
    assert equivalent(dk_pi2_ln2(2), ((LN * -1) + 1).shift(pow_a=-2) * 2)
    with pytest.raises(ValueError):
        dk_pi2_ln2(0)


def test_substitute_reciprocal_examples():
    assert LN.substitute_reciprocal() == LN * -1
    base = ((PI2_EXPR + LN2) * Fraction(1, 2)).shift(pow_a1=-1)
    sub = base.substitute_reciprocal()
    assert equivalent(sub, base.shift(pow_a=1))
    a = 2.0
    assert sub.evaluate(a) == pytest.approx(base.evaluate(1 / a), rel=1e-14)
    assert sub.substitute_reciprocal() == base


def test_evaluate_examples():
    base = ((PI2_EXPR + LN2) * Fraction(1, 2)).shift(pow_a1=-1)
    assert base.evaluate(1.0) == pytest.approx(math.pi ** 2 / 4, rel=1e-15)
    assert LN.shift(pow_a=-1).evaluate(math.e) == pytest.approx(1 / math.e, rel=1e-15)
    with pytest.raises(ValueError):
        base.evaluate(0.0)
    with pytest.raises(ValueError):
        base.evaluate(-1.0)


def test_second_derivative_against_finite_difference():
    expr = PI2_EXPR + LN2
    d2 = dk_pi2_ln2(2).evaluate(3.0)

    h = Decimal("0.001")
    a = Decimal(3)
    fd = (expr.evaluate_decimal(a + h) - 2 * expr.evaluate_decimal(a) + expr.evaluate_decimal(a - h)) / h ** 2
    assert float(fd) == pytest.approx(d2, rel=1e-6)


def test_lemma_zeroth_derivative_is_function():
    assert lemma_derivative(Fraction(3, 2), 3, 0.7, 0, 1.3) == pytest.approx((1.3 + 1.5) / (1.3 * 0.7 + 1) ** 3)


def test_lemma_special_value():
    assert lemma_derivative(3, 2, 1.0, 2, 1.0) == pytest.approx(1.0, rel=1e-15)


def test_lemma_against_finite_difference():
    exact = lemma_derivative(0, 1, 2.0, 3, 0.5)
    fd = lemma_fd(0, 1, 2, 3, Fraction(1, 2))
    assert abs(exact - fd) / abs(exact) < 1e-5


def test_central_difference_is_exact_for_polynomials():
    assert central_difference(lambda a: a ** 3, 2, 3) == 6
    assert central_difference(lambda a: a ** 2, Fraction(1, 3), 1) == Fraction(2, 3)


def test_pi2_product_refused():
    with pytest.raises(ArithmeticError):
        _ = PI2_EXPR * PI2_EXPR
    assert Pi2Coeff(1, 2) * Pi2Coeff(3, 0) == Pi2Coeff(3, 6)


def test_partial_fractions_detect_hidden_equality():
    lhs = a1_pow(1).shift(pow_a=-1)  # (a+1)/a
    rhs = a_pow(-1) + 1
    assert lhs != rhs
    assert equivalent(lhs, rhs)
    assert not equivalent(lhs, rhs + a_pow(-2))


def test_render_example_and_round_trip():
    e = ((PI2_EXPR + LN2) * Fraction(1, 2)).shift(pow_a1=-1)
    text = render(e)
    assert text == "(1/2)*pi^2*(a+1)^-1 + (1/2)*(a+1)^-1*ln(a)^2"
    assert parse(text) == e
    assert parse("0") == LogPolyExpr()
    mixed = LogPolyExpr.monomial(Pi2Coeff(Fraction(-3, 4), 5), pow_a=2, pow_a1=-3, pow_log=1)
    assert parse(render(mixed)) == mixed


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse("a^x")
