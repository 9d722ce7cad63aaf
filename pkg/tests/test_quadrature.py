import math
from fractions import Fraction

import numpy as np
import pytest

from logint import quadrature as qm
from logint.closed_forms import closed_F_general
from logint.constants import LN_ALPHA_F, PATCH_RADIUS
from logint.quadrature import (
    F_integrand,
    IntegrandError,
    LogIntegrand,
    OracleDidNotConverge,
    evaluate_integrand,
    integrate,
)

PI2 = math.pi ** 2


def test_base_integral_at_one():
    assert integrate(F_integrand(0, 0, 1)).value == pytest.approx(PI2 / 4, rel=1e-14)


def test_zero_valued_integral():
    res = integrate(LogIntegrand((1,), False, ((1.0, 2),)))
    assert abs(res.value) < 1e-12


def test_golden_lucas_k0():
    f = LogIntegrand((3, 2), True, (), ((3.0, 1),))
    assert integrate(f).value == pytest.approx(PI2 / 2 + 2 * LN_ALPHA_F ** 2, rel=1e-13)


def test_pointwise_values():
    f = F_integrand(0, 0, 1)
    assert evaluate_integrand(f, 1.0) == 0.5
    e = math.e
    assert evaluate_integrand(f, e) == pytest.approx(1 / ((e + 1) * (e - 1)), rel=1e-15)
    assert evaluate_integrand(f, 1.002) == pytest.approx(evaluate_integrand(f, 1.002, patched=False), rel=1e-12)
    with pytest.raises(ValueError):
        evaluate_integrand(f, 0.0)


@pytest.mark.parametrize("side", [-1, 1])
def test_patch_boundary_is_smooth(side):
    f = F_integrand(0, 0, 2)
    edge = 1 + side * PATCH_RADIUS
    inside = evaluate_integrand(f, edge - side * 1e-15)
    outside = evaluate_integrand(f, edge + side * 1e-15)
    assert abs(inside - outside) / abs(outside) < 1e-14


def test_log_ratio_series_against_log1p():
    u = np.linspace(-PATCH_RADIUS * 0.999, PATCH_RADIUS * 0.999, 101)
    u = u[u != 0]
    x = 1 - u
    ref = np.log1p(-u) / (-u)
    assert np.max(np.abs(qm._log_ratio(x, u) / ref - 1)) < 1e-15


def test_determinism():
    f = F_integrand(3, 4, 0.25)
    r1, r2 = integrate(f), integrate(f)
    assert r1 == r2


@pytest.mark.parametrize("m, k, a", [(m, k, a) for m in (0, 2, 4) for k in (0, 3, 6) for a in (0.25, 1.0, 10.0)][:20])
def test_self_consistency_when_tolerance_tightens(m, k, a):
    f = F_integrand(m, k, a)
    loose = integrate(f, 1e-8)
    tight = integrate(f, 1e-12)
    assert abs(tight.value - loose.value) <= max(loose.abs_error_estimate, 1e-15 * abs(tight.value))


def test_matches_closed_form_wide_parameters():
    for m, k, a in [(0, 10, 0.1), (5, 5, 50.0), (3, 7, 0.1), (1, 0, 50.0)]:
        exact = closed_F_general(m, k).evaluate(a)
        assert integrate(F_integrand(m, k, a)).value == pytest.approx(exact, rel=1e-9)


def test_nonintegrable_rejected():
    with pytest.raises(IntegrandError):
        integrate(LogIntegrand((0, 0, 1), True, ((1.0, 1),)))
    with pytest.raises(IntegrandError):
        integrate(LogIntegrand((1,), True, ((-1.0, 2),)))
    with pytest.raises(IntegrandError):
        integrate(LogIntegrand((1,), True, ((1.0, 2),), log_power=2))


def test_budget_exhaustion_reports_best_estimate():
    with pytest.raises(OracleDidNotConverge) as info:
        integrate(F_integrand(0, 0, 1), budget=50)
    assert math.isfinite(info.value.best_estimate)
    assert info.value.evaluations >= 50


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv(qm.BUDGET_ENV, "40")
    with pytest.raises(OracleDidNotConverge):
        integrate(F_integrand(1, 1, 2))
    monkeypatch.setenv(qm.BUDGET_ENV, "zero")
    with pytest.raises(ValueError):
        qm.node_budget()


def test_tolerance_floor_enforced():
    with pytest.raises(ValueError):
        integrate(F_integrand(0, 0, 1), 1e-16)


def test_scaled_and_describe():
    f = F_integrand(1, 0, 2).scaled(Fraction(3))
    assert f.numerator == (0, 3)
    assert "(x-1)" in f.describe()
    assert integrate(f).value == pytest.approx(3 * integrate(F_integrand(1, 0, 2)).value, rel=1e-14)
