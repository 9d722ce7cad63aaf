"""Exact right-hand sides for F(m,k,a) and the auxiliary integrals.

    F(m,k,a) = int_0^inf x**m ln(x) / ((x-1) (x+a)**(k+m+1)) dx,   m,k >= 0, a > 0

Each builder returns a :class:`~logint.kernel.LogPolyExpr` in the variable a.
Empty sums (upper limit -1) are zero, so k = 0 needs no special case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import binomial, factorial, harmonic
from .kernel import LN, LN2, PI2, PI2_EXPR, LogPolyExpr, a1_pow, a_pow


@dataclass(frozen=True)
class IntegralSpec:
    m: int
    k: int

    def __post_init__(self):
        if self.m < 0 or self.k < 0:
            raise ValueError(f"m and k must be non-negative, got m={self.m}, k={self.k}")

    @property
    def denominator_power(self) -> int:
        return self.k + self.m + 1


def _check_nonneg(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"{name} must be a non-negative integer, got {v!r}")


def _harmonic_minus_log(j: int) -> LogPolyExpr:
    return LogPolyExpr.constant(harmonic(j)) - LN


def base_integral() -> LogPolyExpr:
    """(pi^2 + ln^2 a) / (2(a+1))."""
    return ((PI2_EXPR + LN2) * Fraction(1, 2)).shift(pow_a1=-1)


@lru_cache(maxsize=None)
def closed_F0(k: int) -> LogPolyExpr:
    _check_nonneg(k=k)
    inner = (PI2_EXPR + LN2) * Fraction(1, 2)
    for j in range(k):
        # (1 + 1/a)**(j+1) = a**-(j+1) (a+1)**(j+1)
        inner += (_harmonic_minus_log(j) * Fraction(1, j + 1)).shift(-(j + 1), j + 1)
    return inner.shift(pow_a1=-(k + 1))


@lru_cache(maxsize=None)
def closed_F1(k: int) -> LogPolyExpr:
    _check_nonneg(k=k)
    head = ((PI2_EXPR + LN2) * Fraction(1, 2)).shift(pow_a1=-(k + 2))
    head += (LN * Fraction(1, k + 1)).shift(pow_a1=-(k + 1))
    tail = LogPolyExpr()
    for j in range(k):
        bracket = _harmonic_minus_log(j).shift(pow_a1=-1) * (k - j) - 1
        tail += (bracket * Fraction(1, j + 1)).shift(-(j + 1), j + 1)
    return head + (tail * Fraction(1, k + 1)).shift(pow_a1=-(k + 1))


@lru_cache(maxsize=None)
def closed_F2(k: int) -> LogPolyExpr:
    _check_nonneg(k=k)
    head = ((PI2_EXPR + LN2) * Fraction(1, 2)).shift(pow_a1=-(k + 3))
    # (a + 3 + 2k)/(a+1) ln a + 1
    inner = (LN.shift(pow_a=1) + LN * (3 + 2 * k)).shift(pow_a1=-1) + 1
    s = LogPolyExpr()
    for j in range(k):
        bracket = (
            _harmonic_minus_log(j).shift(pow_a1=-1) * ((k - j) * (k + 1 - j))
            - a_pow(1)
            - (1 + 2 * (k - j))
        )
        s += (bracket * Fraction(1, j + 1)).shift(-j, j)
    inner += s.shift(pow_a=-1)
    return head + (inner * Fraction(1, (k + 1) * (k + 2))).shift(pow_a1=-(k + 1))


def dk_pi2_ln2(k: int) -> LogPolyExpr:
    """Closed form of the k-th derivative of pi^2 + ln^2 a (k >= 1)."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("formula holds for k >= 1 only")
    scale = 2 * (-1) ** k * factorial(k - 1)
    return (_harmonic_minus_log(k - 1) * scale).shift(pow_a=-k)


@lru_cache(maxsize=None)
def closed_F_general(m: int, k: int) -> LogPolyExpr:
    """General F(m,k,a): derivatives in b at b = 1/a, done in the kernel."""
    _check_nonneg(m=m, k=k)
    n = k + m + 1
    cbin = binomial(k + m, m)
    result = (PI2_EXPR * Fraction(1, 2)).shift(pow_a1=-n)

    block = (LN2.shift(pow_a1=-(k + 1))).differentiate(m).substitute_reciprocal()
    w = Fraction((-1) ** m, 2 * factorial(m) * cbin)
    result += (block * w).shift(pow_a=-n)

    for j in range(k):
        w = Fraction(binomial(j + m, m), cbin) * harmonic(k - j - 1) / (k - j)
        result += LogPolyExpr.monomial(w, pow_a=j - k, pow_a1=-(j + m + 1))

    block = LogPolyExpr()
    for j in range(k):
        d = LN.shift(pow_a1=-(j + 1)).differentiate(m).substitute_reciprocal()
        block += d * Fraction(1, k - j)
    w = Fraction((-1) ** m, factorial(m) * cbin)
    result += (block * w).shift(pow_a=-n)
    return result


@lru_cache(maxsize=None)
def closed_F_general_alt(m: int, k: int) -> LogPolyExpr:
    """General F(m,k,a) via k derivatives in a of the F(m,0,a) building blocks."""
    _check_nonneg(m=m, k=k)
    n = k + m + 1
    cbin = binomial(k + m, m)
    result = (PI2_EXPR * Fraction(1, 2)).shift(pow_a1=-n)
    d = LN2.shift(pow_a1=-(m + 1)).differentiate(k)
    result += d * Fraction((-1) ** k, 2 * factorial(k) * cbin)
    for j in range(m):
        w = Fraction(binomial(k + j, j), cbin) * harmonic(m - j - 1) / (m - j)
        result += LogPolyExpr.monomial(w, pow_a1=-(j + k + 1))
    block = LogPolyExpr()
    for j in range(m):
        block += LN.shift(pow_a1=-(j + 1)).differentiate(k) * Fraction(1, m - j)
    result += block * Fraction((-1) ** k, factorial(k) * cbin)
    return result


@lru_cache(maxsize=None)
def closed_Fm0(m: int) -> LogPolyExpr:
    """F(m,0,a) in the fully simplified harmonic-sum shape."""
    _check_nonneg(m=m)
    inner = PI2_EXPR + LN2
    for j in range(m):
        inner += ((LogPolyExpr.constant(harmonic(j)) + LN) * Fraction(2, j + 1)).shift(pow_a1=j + 1)
    return (inner * Fraction(1, 2)).shift(pow_a1=-(m + 1))


def closed_Fm0_derivative_form(m: int) -> LogPolyExpr:
    """F(m,0,a) as pi^2/(2(a+1)^(m+1)) plus the m-th b-derivative block at b = 1/a."""
    _check_nonneg(m=m)
    block = LN2.shift(pow_a1=-1).differentiate(m).substitute_reciprocal()
    head = (PI2_EXPR * Fraction(1, 2)).shift(pow_a1=-(m + 1))
    return head + (block * Fraction((-1) ** m, 2 * factorial(m))).shift(pow_a=-(m + 1))


def reciprocal_F0(k: int) -> LogPolyExpr:
    """int_0^inf ln x / ((x-1)(a x + 1)^(k+1)) dx, the F(0,k,1/a) rewrite."""
    _check_nonneg(k=k)
    result = ((PI2_EXPR + LN2) * Fraction(1, 2)).shift(pow_a1=-(k + 1))
    for j in range(k):
        num = LogPolyExpr.constant(harmonic(k - j - 1)) + LN
        result += (num * Fraction(1, k - j)).shift(pow_a1=-(j + 1))
    return result


def ln_power_integral(k: int) -> LogPolyExpr:
    """int_0^inf ln x / (x+a)^(k+1) dx = (ln a - H_{k-1}) / (k a^k), k >= 1."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("integral diverges for k = 0")
    return ((LN - harmonic(k - 1)) * Fraction(1, k)).shift(pow_a=-k)


def binom_weighted_rhs(m: int, k: int, a) -> Fraction | float:
    """1 / ((m-1) k a^(m-1)); exact when a is rational."""
    if m < 2 or k < 1:
        raise ValueError("need m >= 2 and k >= 1")
    return 1 / ((m - 1) * k * a ** (m - 1))


def binom_weighted_identity(m: int, k: int, a):
    """Integrand and value of the binomially weighted identity.

    integrand: x^(k-1) ln x (x C(m+k-2, m-2) - a C(m+k-2, m-1)) / (x+a)^(k+m)
    """
    from .exact import to_rational
    from .quadrature import LogIntegrand

    if m < 2 or k < 1:
        raise ValueError("need m >= 2 and k >= 1")
    ar = to_rational(a)
    if ar <= 0:
        raise ValueError("a must be positive")
    num = [Fraction(0)] * (k + 1)
    num[k - 1] = -ar * binomial(m + k - 2, m - 1)
    num[k] += Fraction(binomial(m + k - 2, m - 2))
    integrand = LogIntegrand(
        numerator=tuple(num),
        has_xminus1_factor=False,
        linear_factors=((float(ar), k + m),),
    )
    return integrand, binom_weighted_rhs(m, k, ar)


def geometric_numerator_identity(k: int):
    """(minus, plus) closed forms for int (x^k -+ 1) ln x / ((x-1)(x+a)^(k+1)) dx."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be >= 1")
    minus = LogPolyExpr()
    plus = (PI2_EXPR + LN2).shift(pow_a1=-(k + 1))
    for j in range(k):
        aj = LogPolyExpr.monomial(1, pow_a=j + 1)
        hj = harmonic(j)
        m_br = (aj - 1) * hj + (aj + 1) * LN
        p_br = (aj + 1) * hj + (aj - 1) * LN
        minus += (m_br * Fraction(1, j + 1)).shift(-(j + 1), j + 1 - (k + 1))
        plus += (p_br * Fraction(1, j + 1)).shift(-(j + 1), j + 1 - (k + 1))
    return minus, plus


def closed_form(m: int, k: int) -> LogPolyExpr:
    """Preferred builder for F(m,k,a)."""
    return closed_F_general(m, k)


def explicit_displays():
    """Small cases in single-fraction form, keyed by (m, k).

    Each one is built by hand from its numerator and denominator and serves as
    a golden value for the general builders.  The (0, 1) entry keeps the
    reference denominator 2a^2(a+1)^2, which is off by a factor a.
    """
    L, L2, P = LN, LN2, PI2_EXPR
    A = a_pow(1)
    A1 = LogPolyExpr.monomial(1, pow_a1=1)
    sq = P + L2
    out = {}
    out[(0, 0)] = base_integral()
    out[(0, 1)] = (A * sq - A1 * L * 2).shift(-2, -2) * Fraction(1, 2)
    out[(0, 2)] = (A * A * sq - A1 * (A * 3 + 1) * L + A1 * A1).shift(-2, -3) * Fraction(1, 2)
    out[(1, 0)] = (sq * Fraction(1, 2)).shift(pow_a1=-2) + L.shift(pow_a1=-1)
    out[(1, 1)] = (A * sq + (A * A - 1) * L - A1 * A1).shift(-1, -3) * Fraction(1, 2)
    out[(1, 2)] = (
        A * A * sq * 3 + A1 * (A * A * 2 - A * 5 - 1) * L - A * A1 * A1 * 3
    ).shift(-2, -4) * Fraction(1, 6)
    out[(2, 0)] = (
        (sq * Fraction(1, 2)).shift(pow_a1=-3)
        + ((A + 3) * L * Fraction(1, 2)).shift(pow_a1=-2)
        + a1_pow(-1) * Fraction(1, 2)
    )
    return out


__all__ = [
    "IntegralSpec",
    "PI2",
    "base_integral",
    "closed_F0",
    "closed_F1",
    "closed_F2",
    "dk_pi2_ln2",
    "closed_F_general",
    "closed_F_general_alt",
    "closed_Fm0",
    "closed_Fm0_derivative_form",
    "reciprocal_F0",
    "ln_power_integral",
    "binom_weighted_identity",
    "binom_weighted_rhs",
    "geometric_numerator_identity",
    "closed_form",
    "explicit_displays",
]
