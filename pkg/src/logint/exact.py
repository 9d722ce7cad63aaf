"""Exact arithmetic: rationals, Q(sqrt 5), harmonic and Fibonacci/Lucas numbers.

``Rational`` is :class:`fractions.Fraction`; it is already an always-reduced
big-integer fraction, which is all the symbolic layer needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Union

from . import constants

Rational = Fraction
Number = Union[int, Fraction]


def to_rational(x) -> Fraction:
    """Coerce ints, Fractions, decimal strings and floats (exactly) to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, (int, str, Decimal)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Rational")


def fraction_to_decimal(x: Fraction) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = constants.DECIMAL_DIGITS
        return Decimal(x.numerator) / Decimal(x.denominator)


# --------------------------------------------------------------------------
# combinatorial helpers

@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return 1 if n < 2 else n * factorial(n - 1)


def binomial(n: int, k: int) -> int:
    """C(n, k) with the combinatorial convention: 0 unless 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    num = 1
    for i in range(k):
        num = num * (n - i) // (i + 1)
    return num


_HARMONIC = [Fraction(0)]


def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0."""
    if n < 0:
        raise ValueError("harmonic numbers are defined for n >= 0")
    while len(_HARMONIC) <= n:
        _HARMONIC.append(_HARMONIC[-1] + Fraction(1, len(_HARMONIC)))
    return _HARMONIC[n]


_FIB = [0, 1]
_LUC = [2, 1]


def _extend(n: int) -> None:
    while len(_FIB) <= n:
        _FIB.append(_FIB[-1] + _FIB[-2])
        _LUC.append(_LUC[-1] + _LUC[-2])


def fib(n: int) -> int:
    if n < 0:
        raise ValueError("negative Fibonacci index")
    _extend(n)
    return _FIB[n]


def lucas(n: int) -> int:
    if n < 0:
        raise ValueError("negative Lucas index")
    _extend(n)
    return _LUC[n]


def _fib_signed(n: int) -> int:
    # F_{-n} = (-1)^(n+1) F_n
    if n >= 0:
        return fib(n)
    return fib(-n) if (-n) % 2 else -fib(-n)


def _lucas_signed(n: int) -> int:
    # L_{-n} = (-1)^n L_n
    if n >= 0:
        return lucas(n)
    return lucas(-n) if n % 2 == 0 else -lucas(-n)


@dataclass(frozen=True)
class SequenceTable:
    fib: tuple
    lucas: tuple
    harmonic: tuple

    @classmethod
    def build(cls, n: int) -> "SequenceTable":
        return cls(
            tuple(fib(i) for i in range(n + 1)),
            tuple(lucas(i) for i in range(n + 1)),
            tuple(harmonic(i) for i in range(n + 1)),
        )


# --------------------------------------------------------------------------
# Q(sqrt 5)

class Sqrt5Number:
    """p + q*sqrt(5) with rational p, q."""

    __slots__ = ("p", "q")

    def __init__(self, p: Number = 0, q: Number = 0):
        self.p = to_rational(p)
        self.q = to_rational(q)

    @classmethod
    def coerce(cls, x) -> "Sqrt5Number":
        if isinstance(x, Sqrt5Number):
            return x
        return cls(to_rational(x), 0)

    def __repr__(self) -> str:
        return f"Sqrt5Number({self.p!s}, {self.q!s})"

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        if self.p == 0:
            return f"{self.q}*sqrt5"
        sign = "+" if self.q > 0 else "-"
        return f"{self.p} {sign} {abs(self.q)}*sqrt5"

    def __eq__(self, other) -> bool:
        try:
            other = Sqrt5Number.coerce(other)
        except TypeError:
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __hash__(self) -> int:
        return hash((self.p, self.q))

    def __bool__(self) -> bool:
        return bool(self.p) or bool(self.q)

    def __neg__(self) -> "Sqrt5Number":
        return Sqrt5Number(-self.p, -self.q)

    def __add__(self, other) -> "Sqrt5Number":
        try:
            other = Sqrt5Number.coerce(other)
        except TypeError:
            return NotImplemented
        return Sqrt5Number(self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other) -> "Sqrt5Number":
        try:
            other = Sqrt5Number.coerce(other)
        except TypeError:
            return NotImplemented
        return Sqrt5Number(self.p - other.p, self.q - other.q)

    def __rsub__(self, other) -> "Sqrt5Number":
        return Sqrt5Number.coerce(other) - self

    def __mul__(self, other) -> "Sqrt5Number":
        try:
            other = Sqrt5Number.coerce(other)
        except TypeError:
            return NotImplemented
        return Sqrt5Number(
            self.p * other.p + 5 * self.q * other.q,
            self.p * other.q + self.q * other.p,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "Sqrt5Number":
        return Sqrt5Number(self.p, -self.q)

    def norm(self) -> Fraction:
        return self.p * self.p - 5 * self.q * self.q

    def inverse(self) -> "Sqrt5Number":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt 5)")
        return Sqrt5Number(self.p / n, -self.q / n)

    def __truediv__(self, other) -> "Sqrt5Number":
        try:
            other = Sqrt5Number.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Sqrt5Number":
        return Sqrt5Number.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Sqrt5Number":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = Sqrt5Number(1)
        e = abs(n)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def to_decimal(self) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = constants.DECIMAL_DIGITS
            return fraction_to_decimal(self.p) + fraction_to_decimal(self.q) * constants.sqrt5_decimal()

    def __float__(self) -> float:
        return float(self.to_decimal())

    def is_rational(self) -> bool:
        return self.q == 0


SQRT5 = Sqrt5Number(0, 1)
ALPHA = Sqrt5Number(Fraction(1, 2), Fraction(1, 2))
BETA = Sqrt5Number(Fraction(1, 2), Fraction(-1, 2))


def golden_power(n: int) -> Sqrt5Number:
    """alpha**n as (L_n + F_n sqrt 5)/2; negative n uses alpha**-n = (-1)**n beta**n."""
    if n >= 0:
        return Sqrt5Number(Fraction(lucas(n), 2), Fraction(fib(n), 2))
    m = -n
    sign = 1 if m % 2 == 0 else -1
    return Sqrt5Number(Fraction(sign * lucas(m), 2), Fraction(-sign * fib(m), 2))


def sqrt5_power(n: int) -> Sqrt5Number:
    """5**(n/2) kept exact: 5**(n//2) * sqrt5**(n % 2), any integer n."""
    return SQRT5 ** n


# --------------------------------------------------------------------------
# sum/difference factorisations for same-parity indices

@dataclass(frozen=True)
class FactorPair:
    """scale * X_i * Y_j where X, Y are 'F' or 'L'."""

    scale: int
    left: tuple
    right: tuple

    @property
    def value(self) -> int:
        return self.scale * _term(*self.left) * _term(*self.right)

    def __str__(self) -> str:
        body = f"{self.left[0]}_{self.left[1]}*{self.right[0]}_{self.right[1]}"
        return body if self.scale == 1 else f"{self.scale}*{body}"


def _term(kind: str, n: int) -> int:
    return _fib_signed(n) if kind == "F" else _lucas_signed(n)


FACTORIZATION_KINDS = ("F+F", "F-F", "L+L", "L-L")


def fib_sum_factorization(u: int, v: int, kind: str) -> FactorPair:
    """Factor F_u +- F_v or L_u +- L_v (u, v of equal parity) into a product.

    Indices may be negative here; the usual extension F_{-n} = (-1)^(n+1) F_n,
    L_{-n} = (-1)^n L_n is used.
    """
    if kind not in FACTORIZATION_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {FACTORIZATION_KINDS}")
    if (u - v) % 2:
        raise ValueError(f"u={u} and v={v} must have the same parity")
    d, s = (u - v) // 2, (u + v) // 2
    even = d % 2 == 0
    if kind == "F+F":
        return FactorPair(1, ("L", d), ("F", s)) if even else FactorPair(1, ("F", d), ("L", s))
    if kind == "F-F":
        return FactorPair(1, ("F", d), ("L", s)) if even else FactorPair(1, ("L", d), ("F", s))
    if kind == "L+L":
        return FactorPair(1, ("L", d), ("L", s)) if even else FactorPair(5, ("F", d), ("F", s))
    return FactorPair(5, ("F", d), ("F", s)) if even else FactorPair(1, ("L", d), ("L", s))


def direct_sum(u: int, v: int, kind: str) -> int:
    """The left-hand side F_u +- F_v (or Lucas) evaluated from the sequences."""
    seq = kind[0]
    a, b = _term(seq, u), _term(seq, v)
    return a + b if kind[1] == "+" else a - b


# --------------------------------------------------------------------------
# golden values: c0 + c1 pi^2 + c2 ln(alpha) + c3 ln(alpha)^2 over Q(sqrt 5)

class GoldenValue:
    __slots__ = ("c0", "c1", "c2", "c3")

    BASIS = ("1", "pi^2", "ln(alpha)", "ln(alpha)^2")

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c0 = Sqrt5Number.coerce(c0)
        self.c1 = Sqrt5Number.coerce(c1)
        self.c2 = Sqrt5Number.coerce(c2)
        self.c3 = Sqrt5Number.coerce(c3)

    @property
    def coeffs(self) -> tuple:
        return (self.c0, self.c1, self.c2, self.c3)

    def __repr__(self) -> str:
        return "GoldenValue(" + ", ".join(repr(c) for c in self.coeffs) + ")"

    def __str__(self) -> str:
        parts = []
        for c, name in zip(self.coeffs, self.BASIS):
            if not c:
                continue
            cs = f"({c})"
            parts.append(cs if name == "1" else f"{cs}*{name}")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other) -> bool:
        if not isinstance(other, GoldenValue):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "GoldenValue") -> "GoldenValue":
        if not isinstance(other, GoldenValue):
            return NotImplemented
        return GoldenValue(*(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "GoldenValue") -> "GoldenValue":
        if not isinstance(other, GoldenValue):
            return NotImplemented
        return GoldenValue(*(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "GoldenValue":
        return GoldenValue(*(-a for a in self.coeffs))

    def scale(self, s) -> "GoldenValue":
        s = Sqrt5Number.coerce(s)
        return GoldenValue(*(s * a for a in self.coeffs))

    def __mul__(self, s) -> "GoldenValue":
        try:
            return self.scale(s)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, s) -> "GoldenValue":
        return self.scale(Sqrt5Number.coerce(s).inverse())

    def to_decimal(self) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = constants.DECIMAL_DIGITS
            la = constants.ln_alpha_decimal()
            basis = (Decimal(1), constants.pi2_decimal(), la, la * la)
            return sum((c.to_decimal() * b for c, b in zip(self.coeffs, basis)), Decimal(0))

    def to_float(self) -> float:
        return float(self.to_decimal())

    __float__ = to_float
