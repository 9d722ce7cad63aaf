"""Fibonacci/Lucas specialisations of the F(0,k,a) and F(m,0,a) closed forms.

Every right-hand side lives exactly in span{1, pi^2, ln(alpha), ln(alpha)^2}
over Q(sqrt 5).  Two independent routes are provided:

* :func:`build_rhs` assembles the value from the explicit Fibonacci/Lucas
  formulas (parity case tables, powers of sqrt 5, harmonic sums);
* :func:`derive_rhs` substitutes a = alpha**(2r) and a = alpha**(-2r) into the
  exact closed forms and combines them.

The families pair F(., ., A) with F(., ., B) where A = alpha**(2r), B = 1/A, so
(x+A)(x+B) = x^2 + L_{2r} x + 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .closed_forms import base_integral, closed_F0, closed_F_general
from .exact import (
    ALPHA,
    SQRT5,
    GoldenValue,
    Sqrt5Number,
    binomial,
    fib,
    golden_power,
    harmonic,
    lucas,
    sqrt5_power,
    to_rational,
)
from .kernel import LogPolyExpr
from .quadrature import LogIntegrand


class FibFamily(str, enum.Enum):
    # pairs a = alpha^2, alpha^-2 in F(0,k,a); quadratic x^2+3x+1
    GOLDEN_LUCAS = "golden.L"
    GOLDEN_FIB = "golden.F"
    # a = alpha^(2r), alpha^(-2r) in F(0,k,a), r even
    EVEN_R_LUCAS = "even_r.L"
    EVEN_R_FIB = "even_r.F"
    # a = alpha^(2r), alpha^(-2r) in F(m,0,a), r even
    POWER_LUCAS = "power.L"
    POWER_FIB = "power.F"
    # power family with m = k, minus / plus the even_r family
    COMBINED_MINUS_LUCAS = "combined_minus.L"
    COMBINED_PLUS_LUCAS = "combined_plus.L"
    COMBINED_MINUS_FIB = "combined_minus.F"
    COMBINED_PLUS_FIB = "combined_plus.F"

    @property
    def uses_r(self) -> bool:
        return not self.name.startswith("GOLDEN")

    @property
    def lucas(self) -> bool:
        return self.value.endswith(".L")


@dataclass(frozen=True)
class FibIntegrandSpec:
    family: FibFamily
    n: int  # k, or m for the power family
    r: int = 2

    def __post_init__(self):
        object.__setattr__(self, "family", FibFamily(self.family))
        if self.n < 0:
            raise ValueError("k (or m) must be non-negative")
        if self.family.uses_r:
            if self.r % 2 or self.r < 2:
                raise ValueError(f"family {self.family.value} needs an even r >= 2, got r={self.r}")

    @property
    def effective_r(self) -> int:
        return self.r if self.family.uses_r else 1


def _seq(lucas_kind: bool):
    return lucas if lucas_kind else fib


# --------------------------------------------------------------------------
# integrands

def _binomial_sum(n: int, r: int, lucas_kind: bool) -> List[Tuple[int, int]]:
    """[(C(n+1, j) * X_{2rj}, j)] for j = 0..n+1, X = L or F."""
    seq = _seq(lucas_kind)
    return [(binomial(n + 1, j) * seq(2 * r * j), j) for j in range(n + 2)]


def build_integrand(spec: FibIntegrandSpec) -> LogIntegrand:
    fam, n = spec.family, spec.n
    r = spec.effective_r
    coeffs = _binomial_sum(n, r, fam.lucas)
    if fam in (FibFamily.GOLDEN_LUCAS, FibFamily.GOLDEN_FIB, FibFamily.EVEN_R_LUCAS, FibFamily.EVEN_R_FIB):
        # sum_j C(n+1,j) X_{2rj} x^(n+1-j)
        terms = [(c, n + 1 - j) for c, j in coeffs]
    elif fam in (FibFamily.POWER_LUCAS, FibFamily.POWER_FIB):
        terms = [(c, 2 * n + 1 - j) for c, j in coeffs]
    else:
        # x^(n+1) (x^n -+ 1) sum_j C(n+1,j) X_{2rj} x^-j, cleared to a polynomial
        sign = -1 if "minus" in fam.value else 1
        terms = [(c, 2 * n + 1 - j) for c, j in coeffs] + [(sign * c, n + 1 - j) for c, j in coeffs]
    degree = max(e for _, e in terms)
    num = [Fraction(0)] * (degree + 1)
    for c, e in terms:
        if e < 0:
            raise AssertionError("negative power left in numerator")
        num[e] += c
    return LogIntegrand(
        tuple(num),
        True,
        (),
        ((float(lucas(2 * r)), n + 1),),
        label=f"{fam.value}(n={n}, r={r})",
    )


# --------------------------------------------------------------------------
# right-hand sides from the Fibonacci/Lucas formulas

def _pi_ln2_block(coeff: Sqrt5Number, r: int) -> GoldenValue:
    """coeff * (pi^2 + 4 r^2 ln^2 alpha)."""
    return GoldenValue(0, coeff, 0, coeff * (4 * r * r))


def _golden_rhs(k: int, lucas_kind: bool) -> GoldenValue:
    sign_k = (-1) ** k
    if lucas_kind:
        head = (Sqrt5Number(lucas(k + 1)) / SQRT5) if k % 2 else Sqrt5Number(fib(k + 1))
        head = head / (sqrt5_power(k) * 2)
        prefactor = Sqrt5Number(sign_k) / sqrt5_power(k)
    else:
        head = Sqrt5Number(fib(k + 1)) if k % 2 else (Sqrt5Number(lucas(k + 1)) / SQRT5)
        head = head / (sqrt5_power(k + 1) * 2)
        prefactor = Sqrt5Number(-sign_k) / sqrt5_power(k + 1)
    total = _pi_ln2_block(head, 1)
    for j in range(k):
        w = prefactor * sqrt5_power(j) * Fraction((-1) ** j, j + 1)
        lj = lucas(k + 2 + j)
        aj = golden_power(k + 2 + j)
        par = (-1) ** (k - j)
        if lucas_kind:
            h_part = lj + aj * (par - 1)
            l_part = lj - aj * (par + 1)
        else:
            h_part = lj - aj * (par + 1)
            l_part = lj + aj * (par - 1)
        total = total + GoldenValue(w * h_part * harmonic(j), 0, w * l_part * (-2), 0)
    return total


def _even_r_rhs(k: int, r: int, lucas_kind: bool) -> GoldenValue:
    Lr = lucas(r)
    lead = lucas(r * (k + 1)) if lucas_kind else fib(r * (k + 1))
    total = _pi_ln2_block(Sqrt5Number(Fraction(lead, 2 * Lr ** (k + 1))), r)
    for j in range(k):
        w = Fraction(Lr ** j, (j + 1) * Lr ** k)
        idx = r * (k + 2 + j)
        if lucas_kind:
            c0 = lucas(idx) * harmonic(j)
            c2 = SQRT5 * (2 * r * fib(idx))
        else:
            c0 = fib(idx) * harmonic(j)
            c2 = Sqrt5Number(2 * r * lucas(idx)) / SQRT5
        total = total + GoldenValue(c0, 0, c2, 0).scale(w)
    return total


def _power_rhs(m: int, r: int, lucas_kind: bool) -> GoldenValue:
    Lr = lucas(r)
    lead = lucas(r * (m + 1)) if lucas_kind else fib(r * (m + 1))
    total = _pi_ln2_block(Sqrt5Number(Fraction(lead, 2 * Lr ** (m + 1))), r)
    for j in range(m):
        w = Fraction(Lr ** j, (j + 1) * Lr ** m)
        idx = r * (m - j)
        if lucas_kind:
            c0 = lucas(idx) * harmonic(j)
            c2 = SQRT5 * (-2 * r * fib(idx))
        else:
            c0 = fib(idx) * harmonic(j)
            c2 = SQRT5 * Fraction(-2 * r * lucas(idx), 5)
        total = total + GoldenValue(c0, 0, c2, 0).scale(w)
    return total


def _combined_rhs(k: int, r: int, fam: FibFamily) -> GoldenValue:
    Lr = lucas(r)
    total = GoldenValue()
    if fam is FibFamily.COMBINED_MINUS_LUCAS:
        for j in range(k):
            w = Fraction(-5 * Lr ** j * fib(r * (k + 1)), (j + 1) * Lr ** k)
            c0 = fib(r * (j + 1)) * harmonic(j)
            c2 = SQRT5 * Fraction(2 * r * lucas(r * (j + 1)), 5)
            total = total + GoldenValue(c0, 0, c2, 0).scale(w)
        return total
    if fam is FibFamily.COMBINED_MINUS_FIB:
        for j in range(k):
            w = Fraction(-lucas(r * (k + 1)) * Lr ** j, (j + 1) * Lr ** k)
            c0 = fib(r * (j + 1)) * harmonic(j)
            c2 = SQRT5 * Fraction(2 * r * lucas(r * (j + 1)), 5)
            total = total + GoldenValue(c0, 0, c2, 0).scale(w)
        return total
    outer = lucas(r * (k + 1)) if fam is FibFamily.COMBINED_PLUS_LUCAS else fib(r * (k + 1))
    total = _pi_ln2_block(Sqrt5Number(Fraction(outer, Lr ** (k + 1))), r)
    for j in range(k):
        w = Fraction(outer * Lr ** j, (j + 1) * Lr ** k)
        c0 = lucas(r * (j + 1)) * harmonic(j)
        c2 = SQRT5 * (2 * r * fib(r * (j + 1)))
        total = total + GoldenValue(c0, 0, c2, 0).scale(w)
    return total


def build_rhs(spec: FibIntegrandSpec) -> GoldenValue:
    fam, n, r = spec.family, spec.n, spec.effective_r
    if fam in (FibFamily.GOLDEN_LUCAS, FibFamily.GOLDEN_FIB):
        return _golden_rhs(n, fam.lucas)
    if fam in (FibFamily.EVEN_R_LUCAS, FibFamily.EVEN_R_FIB):
        return _even_r_rhs(n, r, fam.lucas)
    if fam in (FibFamily.POWER_LUCAS, FibFamily.POWER_FIB):
        return _power_rhs(n, r, fam.lucas)
    return _combined_rhs(n, r, fam)


# --------------------------------------------------------------------------
# independent route: exact substitution into the closed forms

def evaluate_golden(expr: LogPolyExpr, n: int) -> GoldenValue:
    """Exact value of ``expr`` at a = alpha**n."""
    a = golden_power(n)
    a1 = a + 1
    c0 = c1 = c2 = c3 = Sqrt5Number(0)
    for (s, p, q), c in expr.items():
        v = (a ** p) * (a1 ** q) * (n ** s)
        if c.r1:
            if s:
                raise ArithmeticError("pi^2 * ln(alpha) is outside the golden basis")
            c1 = c1 + v * c.r1
        if c.r0:
            t = v * c.r0
            if s == 0:
                c0 = c0 + t
            elif s == 1:
                c2 = c2 + t
            elif s == 2:
                c3 = c3 + t
            else:
                raise ArithmeticError("ln(alpha)^3 is outside the golden basis")
    return GoldenValue(c0, c1, c2, c3)


def _pair(expr: LogPolyExpr, r: int, lucas_kind: bool) -> GoldenValue:
    at_a = evaluate_golden(expr, 2 * r)
    at_b = evaluate_golden(expr, -2 * r)
    if lucas_kind:
        return at_a + at_b
    return (at_b - at_a) / SQRT5


def derive_rhs(spec: FibIntegrandSpec) -> GoldenValue:
    fam, n, r = spec.family, spec.n, spec.effective_r
    if fam in (FibFamily.GOLDEN_LUCAS, FibFamily.GOLDEN_FIB, FibFamily.EVEN_R_LUCAS, FibFamily.EVEN_R_FIB):
        return _pair(closed_F0(n), r, fam.lucas)
    if fam in (FibFamily.POWER_LUCAS, FibFamily.POWER_FIB):
        return _pair(closed_F_general(n, 0), r, fam.lucas)
    power = _pair(closed_F_general(n, 0), r, fam.lucas)
    even = _pair(closed_F0(n), r, fam.lucas)
    return power - even if "minus" in fam.value else power + even


# --------------------------------------------------------------------------
# affine families and the golden specialisations of the base integral

def _solve(matrix, rhs):
    """Gauss-Jordan elimination over Fractions (small square systems)."""
    n = len(rhs)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [vi - f * vc for vi, vc in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def affine_family_check(s, q) -> Tuple[LogIntegrand, GoldenValue]:
    """(s x + q) ln x / ((x-1)(x^2+3x+1)) integrates to (s+q)(pi^2 + 4 ln^2 alpha)/10."""
    s, q = to_rational(s), to_rational(q)
    integrand = LogIntegrand((q, s), True, (), ((3.0, 1),), label=f"affine(s={s}, q={q})")
    return integrand, _pi_ln2_block(Sqrt5Number((s + q) / 10), 1)


def affine_quadratic_check(s, q, r) -> Tuple[LogIntegrand, GoldenValue]:
    """(s x^2 + q x + r) ln x / (x^2+3x+1)^2 integrates to 2(s-r) ln(alpha)/sqrt 5."""
    s, q, r = to_rational(s), to_rational(q), to_rational(r)
    integrand = LogIntegrand((r, q, s), False, (), ((3.0, 2),), label=f"affine2(s={s}, q={q}, r={r})")
    return integrand, GoldenValue(0, 0, SQRT5 * (2 * (s - r) / 5), 0)


def derive_affine(s, q) -> GoldenValue:
    """x and 1 numerators from the k = 0 golden pair: x = ((2x+3) - 3)/2."""
    s, q = to_rational(s), to_rational(q)
    lucas0 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_LUCAS, 0))  # (2x+3)
    fib0 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_FIB, 0))  # 1
    x_part = (lucas0 - fib0.scale(3)).scale(Fraction(1, 2))
    return x_part.scale(s) + fib0.scale(q)


def derive_affine_quadratic(s, q, r) -> GoldenValue:
    """Write (x-1)(s x^2 + q x + r) in the numerators of the k = 0, 1 golden pairs.

    Basis: x(x^2+3x+1), x^2+3x+1 (k = 0 pair after cancelling one quadratic),
    2x^2+6x+7 and 2x+3 (the k = 1 pair).
    """
    s, q, r = to_rational(s), to_rational(q), to_rational(r)
    # columns: coefficients of x^3, x^2, x, 1
    basis = [(1, 3, 1, 0), (0, 1, 3, 1), (0, 2, 6, 7), (0, 0, 2, 3)]
    target = (s, q - s, r - q, -r)
    matrix = [[basis[j][i] for j in range(4)] for i in range(4)]
    c = _solve(matrix, target)
    lucas0 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_LUCAS, 0))
    fib0 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_FIB, 0))
    x0 = (lucas0 - fib0.scale(3)).scale(Fraction(1, 2))
    lucas1 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_LUCAS, 1))
    fib1 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_FIB, 1))
    return x0.scale(c[0]) + fib0.scale(c[1]) + lucas1.scale(c[2]) + fib1.scale(c[3])


def _poly_mul(p1, p2):
    out = [Sqrt5Number(0)] * (len(p1) + len(p2) - 1)
    for i, a in enumerate(p1):
        for j, b in enumerate(p2):
            out[i + j] = out[i + j] + a * b
    return out


@dataclass(frozen=True)
class GoldenSpecialization:
    label: str
    integrand: LogIntegrand
    rhs: GoldenValue
    derived: GoldenValue


def golden_base_specializations() -> List[GoldenSpecialization]:
    """Integrals obtained from the base formula at golden-ratio arguments.

    For a = alpha and a = 1/alpha the natural integrands carry a quadratic with a
    positive root that cancels against the numerator; the cancellation is
    checked exactly and the reduced integrand is handed to the oracle.
    """
    quad3 = ((3.0, 1),)
    block = _pi_ln2_block(Sqrt5Number(Fraction(1, 10)), 1)
    fib0 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_FIB, 0))
    lucas0 = derive_rhs(FibIntegrandSpec(FibFamily.GOLDEN_LUCAS, 0))
    x0 = derive_affine(1, 0)
    out = [
        GoldenSpecialization(
            "ln x/((x-1)(x^2+3x+1))",
            LogIntegrand((1,), True, (), quad3),
            block,
            fib0,
        ),
        GoldenSpecialization(
            "(2x+3) ln x/((x-1)(x^2+3x+1))",
            LogIntegrand((3, 2), True, (), quad3),
            block.scale(5),
            lucas0,
        ),
        GoldenSpecialization(
            "(x+1) ln x/((x-1)(x^2+3x+1))",
            LogIntegrand((1, 1), True, (), quad3),
            block.scale(2),
            x0 + fib0,
        ),
        GoldenSpecialization(
            "x ln x/((x-1)(x^2+3x+1))",
            LogIntegrand((0, 1), True, (), quad3),
            block,
            x0,
        ),
    ]
    one = Sqrt5Number(1)
    # (x + alpha)(x + 1 - alpha) = x^2 + x - 1
    assert _poly_mul([ALPHA, one], [one - ALPHA, one]) == [Sqrt5Number(-1), one, one]
    # (x - alpha)(x + alpha - 1) = x^2 - x - 1
    assert _poly_mul([-ALPHA, one], [ALPHA - 1, one]) == [Sqrt5Number(-1), -one, one]
    half = Fraction(1, 2)
    out.append(
        GoldenSpecialization(
            "(x+1-alpha) ln x/((x^2+x-1)(x-1))",
            LogIntegrand((1,), True, ((float(ALPHA), 1),), label="ln x/((x-1)(x+alpha))"),
            GoldenValue(0, ALPHA ** -2 * half, 0, ALPHA ** -2 * half),
            evaluate_golden(base_integral(), 1),
        )
    )
    out.append(
        GoldenSpecialization(
            "(x-alpha) ln x/((x^2-x-1)(x-1))",
            LogIntegrand((1,), True, ((float(ALPHA - 1), 1),), label="ln x/((x-1)(x+1/alpha))"),
            GoldenValue(0, ALPHA ** -1 * half, 0, ALPHA ** -1 * half),
            evaluate_golden(base_integral(), -1),
        )
    )
    return out


def particular_cases() -> List[Tuple[str, FibIntegrandSpec, GoldenValue]]:
    """The k = 0, 1 members of the golden pair with their simplified values."""
    s5inv = SQRT5 / 5
    return [
        ("(2x+3)/(x^2+3x+1)", FibIntegrandSpec(FibFamily.GOLDEN_LUCAS, 0),
         GoldenValue(0, Fraction(1, 2), 0, 2)),
        ("1/(x^2+3x+1)", FibIntegrandSpec(FibFamily.GOLDEN_FIB, 0),
         GoldenValue(0, Fraction(1, 10), 0, Fraction(2, 5))),
        ("(2x^2+6x+7)/(x^2+3x+1)^2", FibIntegrandSpec(FibFamily.GOLDEN_LUCAS, 1),
         GoldenValue(0, Fraction(3, 10), s5inv * 8, Fraction(6, 5))),
        ("(2x+3)/(x^2+3x+1)^2", FibIntegrandSpec(FibFamily.GOLDEN_FIB, 1),
         GoldenValue(0, Fraction(1, 10), s5inv * 4, Fraction(2, 5))),
    ]
