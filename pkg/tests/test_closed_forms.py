import math
from fractions import Fraction

import pytest

from logint import closed_forms as cf
from logint.constants import ALPHA_F, LN_ALPHA_F
from logint.harness import corrected_F01_display
from logint.kernel import LN, LN2, PI2_EXPR, equivalent
from logint.quadrature import LogIntegrand, integrate, quad_F

PI2 = math.pi ** 2


def close(x, y, rel=1e-12):
    return x == pytest.approx(y, rel=rel, abs=1e-15)


def test_base_integral_values():
    base = cf.base_integral()
    assert close(base.evaluate(1.0), PI2 / 4)
    a = ALPHA_F ** 2
    assert close(base.evaluate(a), (PI2 + 4 * LN_ALPHA_F ** 2) / (2 * math.sqrt(5) * ALPHA_F))
    # (pi^2 + ln^2 2)/6
    assert close(base.evaluate(2.0), 1.7250095691679264, rel=1e-15)


def test_F0_small_cases():
    assert cf.closed_F0(0) == cf.base_integral()
    A = 2.0
    L = math.log(A)
    sq = PI2 + L * L
    # F(0,1,a) = (a(pi^2+ln^2 a) - 2(a+1) ln a) / (2a(a+1)^2)
    assert close(cf.closed_F0(1).evaluate(A), (A * sq - 2 * (A + 1) * L) / (2 * A * (A + 1) ** 2))
    assert close(cf.closed_F0(2).evaluate(A),
                 (A * A * sq - (A + 1) * (3 * A + 1) * L + (A + 1) ** 2) / (2 * A * A * (A + 1) ** 3))


def test_F01_reference_denominator_has_extra_factor():
    reference = cf.explicit_displays()[(0, 1)]
    assert not equivalent(reference, cf.closed_F0(1))
    assert equivalent(corrected_F01_display(), cf.closed_F0(1))
    assert close(reference.evaluate(2.0) * 2, cf.closed_F0(1).evaluate(2.0))


@pytest.mark.parametrize("mk", [(0, 0), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0)])
def test_explicit_displays_match_general(mk):
    assert equivalent(cf.explicit_displays()[mk], cf.closed_F_general(*mk))


def test_F1_and_F2_examples():
    a = 0.7
    L = math.log(a)
    assert close(cf.closed_F1(0).evaluate(a), (PI2 + L * L) / (2 * (a + 1) ** 2) + L / (a + 1))
    assert close(cf.closed_F2(0).evaluate(a),
                 (PI2 + L * L) / (2 * (a + 1) ** 3) + (a + 3) * L / (2 * (a + 1) ** 2) + 1 / (2 * (a + 1)))
    assert close(cf.closed_F2(0).evaluate(1.0), PI2 / 16 + 0.25)
    assert cf.closed_F2(1).evaluate(2.0) == pytest.approx(quad_F(2, 1, 2.0).value, rel=1e-9)


def test_general_against_specialised_builders():
    for k in range(11):
        assert equivalent(cf.closed_F_general(0, k), cf.closed_F0(k))
    for a in (0.5, 2.0):
        assert close(cf.closed_F_general(1, 1).evaluate(a), cf.closed_F1(1).evaluate(a))
    for m in range(6):
        assert equivalent(cf.closed_F_general(m, 0), cf.closed_Fm0(m))


def test_alternative_general_form():
    assert equivalent(cf.closed_F_general_alt(0, 0), cf.base_integral())
    assert equivalent(cf.closed_F_general_alt(2, 0), cf.closed_F2(0))
    assert close(cf.closed_F_general_alt(1, 2).evaluate(1.7), cf.closed_F_general(1, 2).evaluate(1.7))


def test_m0_display():
    for m in range(5):
        total = PI2_EXPR + LN2
        for j in range(m):
            total += ((LN + cf.harmonic(j)) * Fraction(2, j + 1)).shift(pow_a1=j + 1)
        display = (total * Fraction(1, 2)).shift(pow_a1=-(m + 1))
        assert equivalent(display, cf.closed_Fm0(m))


def test_ln_power_integral():
    assert cf.ln_power_integral(1).evaluate(1.0) == 0
    assert cf.ln_power_integral(2).evaluate(1.0) == pytest.approx(-0.5)
    assert close(cf.ln_power_integral(3).evaluate(2.0), (math.log(2) - 1.5) / 24)
    q = integrate(LogIntegrand((1,), False, ((1.0, 3),))).value
    assert q == pytest.approx(-0.5, rel=1e-12)
    with pytest.raises(ValueError):
        cf.ln_power_integral(0)


@pytest.mark.parametrize("m, k, a, rhs", [
    (2, 1, 1, Fraction(1)),
    (3, 2, 2, Fraction(1, 16)),
    (2, 3, Fraction(1, 2), Fraction(2, 3)),
])
def test_binomial_weighted(m, k, a, rhs):
    f, value = cf.binom_weighted_identity(m, k, a)
    assert value == rhs
    assert integrate(f).value == pytest.approx(float(rhs), rel=1e-10)


def test_binomial_weighted_rejects_bad_parameters():
    with pytest.raises(ValueError):
        cf.binom_weighted_identity(1, 1, 1)
    with pytest.raises(ValueError):
        cf.binom_weighted_identity(2, 0, 1)


def test_geometric_identities():
    minus, plus = cf.geometric_numerator_identity(1)
    assert minus.evaluate(1.0) == 0
    assert equivalent(plus, cf.closed_F_general(1, 0) + cf.closed_F0(1))
    minus2, _ = cf.geometric_numerator_identity(2)
    q = integrate(LogIntegrand((1, 1), False, ((2.0, 3),))).value
    assert minus2.evaluate(2.0) == pytest.approx(q, rel=1e-9)


def test_reciprocal_helper_by_quadrature():
    for k in range(4):
        a = 2.5
        f = LogIntegrand((Fraction(2, 5) ** (k + 1),), True, ((1 / a, k + 1),))
        assert cf.reciprocal_F0(k).evaluate(a) == pytest.approx(integrate(f).value, rel=1e-9)


def test_negative_parameters_rejected():
    with pytest.raises(ValueError):
        cf.closed_F_general(-1, 0)
    with pytest.raises(ValueError):
        cf.closed_F0(-2)
