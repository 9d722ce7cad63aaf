"""Numerical oracle for integrals of P(x) ln(x) / ((x-1)^e D(x)) over (0, inf).

Strategy
--------
* Split at x = 1 and fold [1, inf) onto (0, 1] with x = 1/t.  For
  f(x) = P(x) ln x / ((x-1) D(x)) the folded integrand is

      t**(d-p-1) * P~(t) * ln t / ((t-1) * D~(t))

  where P~, D~ are the coefficient-reversed polynomials and d, p their degrees
  (without the (x-1) factor the power is d-p-2 and the sign flips).  Both panels
  therefore have the same shape: a log singularity at 0 and a removable point
  at 1.
* Each panel is integrated with the tanh-sinh rule, x = 1/(1 + exp(-pi sinh t)),
  which clusters nodes double-exponentially at both ends.  The step in t is
  halved level by level (old nodes are reused) and the error estimate is the
  difference of successive levels; convergence needs two consecutive levels
  under tolerance.
* ln(x)/(x-1) is replaced by its Taylor series within PATCH_RADIUS of 1.

Everything is deterministic numpy arithmetic; repeated calls give bit-identical
results.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .constants import PATCH_RADIUS, SERIES_CUTOFF
from .exact import to_rational

DEFAULT_NODE_BUDGET = 2_000_000
BUDGET_ENV = "LOGINT_SEED_BUDGET"
T_MAX = 4.0
MAX_LEVEL = 14
MIN_REL_TOL = 1e-13

# number of series terms n with PATCH_RADIUS**n / (n+1) >= SERIES_CUTOFF
_N_SERIES = next(n for n in range(1, 64) if PATCH_RADIUS ** n / (n + 1) < SERIES_CUTOFF)


class IntegrandError(ValueError):
    """The integrand does not satisfy the oracle's integrability contract."""


class OracleDidNotConverge(RuntimeError):
    def __init__(self, message: str, best_estimate: float, abs_error_estimate: float, evaluations: int):
        super().__init__(f"oracle did not converge: {message} (best estimate {best_estimate!r})")
        self.best_estimate = best_estimate
        self.abs_error_estimate = abs_error_estimate
        self.evaluations = evaluations


@dataclass(frozen=True)
class LogIntegrand:
    """numerator(x) * ln(x) / [(x-1)^e * prod (x+a)^p * prod (x^2+Lx+1)^p].

    numerator holds ascending coefficients (exact rationals).
    """

    numerator: Tuple[Fraction, ...]
    has_xminus1_factor: bool = True
    linear_factors: Tuple[Tuple[float, int], ...] = ()
    quadratic_factors: Tuple[Tuple[float, int], ...] = ()
    log_power: int = 1
    label: str = field(default="", compare=False)

    def __post_init__(self):
        num = [to_rational(c) for c in self.numerator]
        while len(num) > 1 and num[-1] == 0:
            num.pop()
        object.__setattr__(self, "numerator", tuple(num))
        object.__setattr__(self, "linear_factors", tuple((float(a), int(p)) for a, p in self.linear_factors))
        object.__setattr__(self, "quadratic_factors", tuple((float(L), int(p)) for L, p in self.quadratic_factors))

    @property
    def numerator_degree(self) -> int:
        return len(self.numerator) - 1

    @property
    def denominator_degree(self) -> int:
        """Degree without the (x-1) factor."""
        return sum(p for _, p in self.linear_factors) + 2 * sum(p for _, p in self.quadratic_factors)

    def validate(self) -> None:
        if self.log_power != 1:
            raise IntegrandError("only a single power of ln(x) is supported")
        if not self.numerator:
            raise IntegrandError("empty numerator")
        for a, p in self.linear_factors:
            if not a > 0 or p < 1:
                raise IntegrandError(f"linear factor (x+{a})^{p} needs a > 0, p >= 1")
        for L, p in self.quadratic_factors:
            if not L > -2 or p < 1:
                raise IntegrandError(f"quadratic factor (x^2+{L}x+1)^{p} needs L > -2, p >= 1")
        total = self.denominator_degree + (1 if self.has_xminus1_factor else 0)
        if total < self.numerator_degree + 2:
            raise IntegrandError(
                f"not integrable at infinity: denominator degree {total} < numerator degree "
                f"{self.numerator_degree} + 2"
            )

    def scaled(self, factor) -> "LogIntegrand":
        f = to_rational(factor)
        return LogIntegrand(
            tuple(c * f for c in self.numerator),
            self.has_xminus1_factor,
            self.linear_factors,
            self.quadratic_factors,
            self.log_power,
            self.label,
        )

    def describe(self) -> str:
        num = " + ".join(f"{c}*x^{i}" for i, c in enumerate(self.numerator) if c) or "0"
        den = ["(x-1)"] if self.has_xminus1_factor else []
        den += [f"(x+{a:g})^{p}" for a, p in self.linear_factors]
        den += [f"(x^2+{L:g}x+1)^{p}" for L, p in self.quadratic_factors]
        return f"({num})*ln(x) / ({'*'.join(den) or '1'})"


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    function_evaluations: int
    subdivisions: int


def F_integrand(m: int, k: int, a) -> LogIntegrand:
    """x^m ln x / ((x-1)(x+a)^(k+m+1))."""
    if m < 0 or k < 0:
        raise ValueError("m and k must be non-negative")
    num = [Fraction(0)] * m + [Fraction(1)]
    return LogIntegrand(tuple(num), True, ((float(a), k + m + 1),), label=f"F({m},{k},{a})")


# --------------------------------------------------------------------------
# pointwise evaluation

def _horner(coeffs: Sequence[float], x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _log_ratio(x: np.ndarray, omx: np.ndarray) -> np.ndarray:
    """ln(x)/(x-1) given x and 1-x (both accurate)."""
    u = -omx
    out = np.empty_like(x)
    near = np.abs(u) < PATCH_RADIUS
    far = ~near
    # log1p keeps full relative accuracy just outside the patch
    lo = far & (x < 0.5)
    hi = far & (x >= 0.5)
    out[lo] = np.log(x[lo]) / u[lo]
    out[hi] = np.log1p(u[hi]) / u[hi]
    if near.any():
        un = u[near]
        # sum_{n>=0} (-1)^n u^n / (n+1), Horner form
        acc = np.zeros_like(un)
        for n in range(_N_SERIES, -1, -1):
            acc = acc * un + (-1.0) ** n / (n + 1)
        out[near] = acc
    return out


class _Panel:
    """Float data for one (0, 1] panel: t**power * P(t)/D(t) * kernel(t)."""

    def __init__(self, num, lin, quad, power, with_xm1, sign):
        self.num = [float(c) for c in num]
        self.lin = lin
        self.quad = quad
        self.power = power
        self.with_xm1 = with_xm1
        self.sign = sign

    def __call__(self, x: np.ndarray, omx: np.ndarray) -> np.ndarray:
        val = _horner(self.num, x)
        for a, p in self.lin:
            val = val / (a + x) ** p
        for L, p in self.quad:
            val = val / (x * (x + L) + 1.0) ** p
        if self.power:
            val = val * x ** self.power
        if self.with_xm1:
            val = val * _log_ratio(x, omx)
        else:
            val = val * np.log(x)
        return self.sign * val


def _panels(f: LogIntegrand):
    num = f.numerator
    d = f.denominator_degree
    p = f.numerator_degree
    head = _Panel(num, f.linear_factors, f.quadratic_factors, 0, f.has_xminus1_factor, 1.0)
    # reversed factors: x + a -> 1 + a t ; x^2 + L x + 1 -> itself
    rev_num = tuple(reversed(num))
    rev_lin = tuple((1.0 / a, p_) for a, p_ in f.linear_factors)
    lin_scale = 1.0
    for a, p_ in f.linear_factors:
        lin_scale *= a ** (-p_)
    rev_num = tuple(c * lin_scale for c in (float(c) for c in rev_num))
    if f.has_xminus1_factor:
        tail = _Panel(rev_num, rev_lin, f.quadratic_factors, d - p - 1, True, 1.0)
    else:
        tail = _Panel(rev_num, rev_lin, f.quadratic_factors, d - p - 2, False, -1.0)
    return head, tail


def evaluate_integrand(f: LogIntegrand, x: float, patched: bool = True) -> float:
    """Pointwise value of the integrand at x > 0.

    With ``patched`` the removable point x = 1 uses the series for ln(x)/(x-1).
    """
    if not x > 0:
        raise ValueError("x must be positive")
    xs = np.array([float(x)])
    val = _horner([float(c) for c in f.numerator], xs)
    for a, p in f.linear_factors:
        val = val / (xs + a) ** p
    for L, p in f.quadratic_factors:
        val = val / (xs * (xs + L) + 1.0) ** p
    if f.has_xminus1_factor:
        if patched:
            val = val * _log_ratio(xs, 1.0 - xs)
        else:
            val = val * np.log(xs) / (xs - 1.0)
    else:
        val = val * np.log(xs)
    return float(val[0])


# --------------------------------------------------------------------------
# tanh-sinh on (0, 1)

def _odd_nodes(level: int):
    h = 2.0 ** -level
    n = int(round(T_MAX / h))
    j = np.arange(-n, n + 1)
    j = j[j % 2 != 0].astype(np.float64)
    t = j * h
    z = math.pi * np.sinh(t)
    x = 1.0 / (1.0 + np.exp(-z))
    omx = 1.0 / (1.0 + np.exp(z))
    w = math.pi * np.cosh(t) * x * omx
    keep = (x > 0.0) & (omx > 0.0) & (w > 0.0)
    return x[keep], omx[keep], w[keep]


def _full_nodes(level: int):
    h = 2.0 ** -level
    n = int(round(T_MAX / h))
    t = np.arange(-n, n + 1).astype(np.float64) * h
    z = math.pi * np.sinh(t)
    x = 1.0 / (1.0 + np.exp(-z))
    omx = 1.0 / (1.0 + np.exp(z))
    w = math.pi * np.cosh(t) * x * omx
    keep = (x > 0.0) & (omx > 0.0) & (w > 0.0)
    return x[keep], omx[keep], w[keep]


def node_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw == "":
        return DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


def integrate(f: LogIntegrand, target_rel_tol: float = 1e-12, budget: int | None = None) -> QuadratureResult:
    """Integrate ``f`` over (0, inf).

    Raises IntegrandError for non-integrable input and OracleDidNotConverge when
    the node budget or level cap is exhausted before two consecutive levels
    agree to ``target_rel_tol`` (relative to the integral, or to the roundoff
    floor of the integral of |f| when the integral itself is ~0).
    """
    f.validate()
    if not target_rel_tol >= MIN_REL_TOL:
        raise ValueError(f"target_rel_tol must be >= {MIN_REL_TOL}")
    budget = node_budget() if budget is None else budget
    panels = _panels(f)

    evals = 0
    x, omx, w = _full_nodes(0)
    sums = np.zeros(len(panels))
    abs_sums = np.zeros(len(panels))
    for i, panel in enumerate(panels):
        v = panel(x, omx) * w
        sums[i] = v.sum()
        abs_sums[i] = np.abs(v).sum()
    evals += len(x) * len(panels)
    estimate = float(sums.sum())  # h = 1 at level 0
    passes = 0
    err = math.inf
    level = 0
    while True:
        level += 1
        if level > MAX_LEVEL or evals >= budget:
            raise OracleDidNotConverge(
                f"reached level {level - 1} with {evals} evaluations", estimate, err, evals
            )
        x, omx, w = _odd_nodes(level)
        for i, panel in enumerate(panels):
            v = panel(x, omx) * w
            sums[i] += v.sum()
            abs_sums[i] += np.abs(v).sum()
        evals += len(x) * len(panels)
        h = 2.0 ** -level
        new = float(sums.sum()) * h
        l1 = float(abs_sums.sum()) * h
        err = abs(new - estimate)
        if not math.isfinite(new):
            raise OracleDidNotConverge("non-finite partial sum", new, math.inf, evals)
        floor = 64 * np.finfo(float).eps * l1
        if err <= max(target_rel_tol * abs(new), floor):
            passes += 1
        else:
            passes = 0
        estimate = new
        if passes >= 2 and level >= 3:
            return QuadratureResult(estimate, err, evals, level * len(panels))


def quad_F(m: int, k: int, a, target_rel_tol: float = 1e-12) -> QuadratureResult:
    return integrate(F_integrand(m, k, a), target_rel_tol)
