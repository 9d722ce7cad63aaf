"""Differentiation-closed expressions in one variable ``a``.

An expression is a finite sum of terms

    c * a**p * (a+1)**q * ln(a)**s,     c = r0 + r1*pi**2 (r0, r1 rational)

The class is closed under d/da and under a -> 1/a, which is all the closed
forms need.  Terms are merged on (s, p, q) and kept sorted by that key, so two
expressions built the same way compare equal structurally.  Because
a**p*(a+1)**q are linearly dependent (e.g. (a+1)/a = 1 + 1/a), structurally
different expressions can still be equal as functions; ``partial_fractions``
maps every expression to a unique normal form in the basis
{a**p, p in Z} + {(a+1)**-q, q >= 1}.

Rendering grammar (``str(expr)``, parsed back by :func:`parse`)::

    expr    := "0" | term (" + " term)*
    term    := coeff ("*" factor)* | factor ("*" factor)*
    coeff   := rat | rat "*pi^2" | "pi^2" | "(" rat " + " rat "*pi^2)"
    rat     := int | "(" int "/" int ")"
    factor  := "a" | "a^" int | "(a+1)" | "(a+1)^" int | "ln(a)" | "ln(a)^" int
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Tuple

from . import constants
from .exact import binomial, factorial, fraction_to_decimal, to_rational


@dataclass(frozen=True)
class Pi2Coeff:
    """r0 + r1*pi**2; products of two pi**2-carrying coefficients are refused."""

    r0: Fraction = Fraction(0)
    r1: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r0", to_rational(self.r0))
        object.__setattr__(self, "r1", to_rational(self.r1))

    @classmethod
    def coerce(cls, x) -> "Pi2Coeff":
        if isinstance(x, Pi2Coeff):
            return x
        return cls(to_rational(x), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.r0) or bool(self.r1)

    def __add__(self, other) -> "Pi2Coeff":
        other = Pi2Coeff.coerce(other)
        return Pi2Coeff(self.r0 + other.r0, self.r1 + other.r1)

    __radd__ = __add__

    def __neg__(self) -> "Pi2Coeff":
        return Pi2Coeff(-self.r0, -self.r1)

    def __sub__(self, other) -> "Pi2Coeff":
        return self + (-Pi2Coeff.coerce(other))

    def __mul__(self, other) -> "Pi2Coeff":
        other = Pi2Coeff.coerce(other)
        if self.r1 and other.r1:
            raise ArithmeticError("product would contain pi**4; outside the expression class")
        return Pi2Coeff(self.r0 * other.r0, self.r0 * other.r1 + self.r1 * other.r0)

    __rmul__ = __mul__

    def to_float(self) -> float:
        if not self.r1:
            return float(self.r0)
        return float(self.r0) + float(self.r1) * constants.PI2_F

    def to_decimal(self) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = constants.DECIMAL_DIGITS
            return fraction_to_decimal(self.r0) + fraction_to_decimal(self.r1) * constants.pi2_decimal()


PI2 = Pi2Coeff(0, 1)


@dataclass(frozen=True)
class LogTerm:
    coeff: Pi2Coeff
    pow_a: int
    pow_a1: int
    pow_log: int

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.pow_log, self.pow_a, self.pow_a1)


Key = Tuple[int, int, int]  # (pow_log, pow_a, pow_a1)


class LogPolyExpr:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[Key, Pi2Coeff] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            if key[0] < 0:
                raise ValueError("negative power of ln(a)")
            if c:
                clean[key] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Iterable[LogTerm]) -> "LogPolyExpr":
        acc: Dict[Key, Pi2Coeff] = {}
        for t in terms:
            _accumulate(acc, t.key, Pi2Coeff.coerce(t.coeff))
        return cls(acc)

    @classmethod
    def monomial(cls, coeff=1, pow_a: int = 0, pow_a1: int = 0, pow_log: int = 0) -> "LogPolyExpr":
        return cls({(pow_log, pow_a, pow_a1): Pi2Coeff.coerce(coeff)})

    @classmethod
    def constant(cls, c) -> "LogPolyExpr":
        return cls.monomial(c)

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> Tuple[LogTerm, ...]:
        return tuple(LogTerm(c, k[1], k[2], k[0]) for k, c in self._terms.items())

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_log_power(self) -> int:
        return max((k[0] for k in self._terms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogPolyExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LogPolyExpr({str(self)!r})"

    def __str__(self) -> str:
        return render(self)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "LogPolyExpr":
        other = _as_expr(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(acc, k, c)
        return LogPolyExpr(acc)

    __radd__ = __add__

    def __neg__(self) -> "LogPolyExpr":
        return LogPolyExpr({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "LogPolyExpr":
        return self + (-_as_expr(other))

    def __rsub__(self, other) -> "LogPolyExpr":
        return _as_expr(other) - self

    def __mul__(self, other) -> "LogPolyExpr":
        if not isinstance(other, LogPolyExpr):
            c = Pi2Coeff.coerce(other)
            return LogPolyExpr({k: v * c for k, v in self._terms.items()})
        acc: Dict[Key, Pi2Coeff] = {}
        for (s1, p1, q1), c1 in self._terms.items():
            for (s2, p2, q2), c2 in other._terms.items():
                _accumulate(acc, (s1 + s2, p1 + p2, q1 + q2), c1 * c2)
        return LogPolyExpr(acc)

    __rmul__ = __mul__

    def shift(self, pow_a: int = 0, pow_a1: int = 0) -> "LogPolyExpr":
        """Multiply by a**pow_a * (a+1)**pow_a1."""
        return LogPolyExpr({(s, p + pow_a, q + pow_a1): c for (s, p, q), c in self._terms.items()})

    # calculus -----------------------------------------------------------

    def differentiate(self, times: int = 1) -> "LogPolyExpr":
        if times < 0:
            raise ValueError("times must be >= 0")
        expr = self
        for _ in range(times):
            expr = expr._derivative()
        return expr

    def _derivative(self) -> "LogPolyExpr":
        acc: Dict[Key, Pi2Coeff] = {}
        for (s, p, q), c in self._terms.items():
            if p:
                _accumulate(acc, (s, p - 1, q), c * p)
            if q:
                _accumulate(acc, (s, p, q - 1), c * q)
            if s:
                _accumulate(acc, (s - 1, p - 1, q), c * s)
        return LogPolyExpr(acc)

    def substitute_reciprocal(self) -> "LogPolyExpr":
        """The expression with a replaced by 1/a.

        (1/a + 1)**q = (a+1)**q * a**-q and ln(1/a) = -ln(a).
        """
        return LogPolyExpr(
            {(s, -p - q, q): (c if s % 2 == 0 else -c) for (s, p, q), c in self._terms.items()}
        )

    def partial_fractions(self) -> "LogPolyExpr":
        """Unique normal form: every term is a**p or (a+1)**q with q < 0."""
        acc: Dict[Key, Pi2Coeff] = {}
        for (s, p, q), c in self._terms.items():
            for (bp, bq), w in _pf_basis(p, q).items():
                _accumulate(acc, (s, bp, bq), c * w)
        return LogPolyExpr(acc)

    # evaluation ---------------------------------------------------------

    def evaluate(self, a: float) -> float:
        """Float value at a > 0; terms are summed (fsum) in canonical order."""
        a = float(a)
        if not a > 0:
            raise ValueError(f"a must be positive, got {a}")
        la = math.log(a)
        a1 = a + 1.0
        vals = []
        for (s, p, q), c in self._terms.items():
            vals.append(c.to_float() * a ** p * a1 ** q * la ** s)
        return math.fsum(vals)

    def evaluate_decimal(self, a, digits: int = constants.DECIMAL_DIGITS) -> Decimal:
        """High-precision evaluation; ``a`` may be a Fraction, int, str or Decimal."""
        with localcontext() as ctx:
            ctx.prec = digits
            if isinstance(a, Fraction):
                ad = Decimal(a.numerator) / Decimal(a.denominator)
            else:
                ad = Decimal(a)
            if ad <= 0:
                raise ValueError("a must be positive")
            la = ad.ln()
            a1 = ad + 1
            total = Decimal(0)
            for (s, p, q), c in self._terms.items():
                term = c.to_decimal() * ad ** p * a1 ** q
                if s:  # Decimal rejects 0 ** 0 at a = 1
                    term *= la ** s
                total += term
            return total


def _accumulate(acc: Dict[Key, Pi2Coeff], key: Key, c: Pi2Coeff) -> None:
    prev = acc.get(key)
    new = c if prev is None else prev + c
    if new:
        acc[key] = new
    elif prev is not None:
        del acc[key]


def _as_expr(x) -> LogPolyExpr:
    return x if isinstance(x, LogPolyExpr) else LogPolyExpr.constant(x)


@lru_cache(maxsize=None)
def _pf_basis_cached(p: int, q: int) -> Tuple[Tuple[Tuple[int, int], Fraction], ...]:
    out: Dict[Tuple[int, int], Fraction] = {}

    def add(key, w):
        out[key] = out.get(key, Fraction(0)) + w

    if q >= 0:
        # (a+1)**q expanded: a Laurent polynomial in a
        for i in range(q + 1):
            add((p + i, 0), Fraction(binomial(q, i)))
    elif p == 0:
        add((0, q), Fraction(1))
    elif p > 0:
        # a**p = ((a+1) - 1)**p
        for i in range(p + 1):
            w = Fraction(binomial(p, i) * (-1) ** (p - i))
            for key, v in _pf_basis_cached(0, q + i):
                add(key, w * v)
    else:
        # 1/(a(a+1)) = 1/a - 1/(a+1)
        for key, v in _pf_basis_cached(p, q + 1):
            add(key, v)
        for key, v in _pf_basis_cached(p + 1, q):
            add(key, -v)
    return tuple(sorted((k, v) for k, v in out.items() if v))


def _pf_basis(p: int, q: int) -> Dict[Tuple[int, int], Fraction]:
    return dict(_pf_basis_cached(p, q))


# --------------------------------------------------------------------------
# module-level operations

def differentiate(e: LogPolyExpr, times: int = 1) -> LogPolyExpr:
    return e.differentiate(times)


def substitute_reciprocal(e: LogPolyExpr) -> LogPolyExpr:
    return e.substitute_reciprocal()


def evaluate(e: LogPolyExpr, a: float) -> float:
    return e.evaluate(a)


def equivalent(e1: LogPolyExpr, e2: LogPolyExpr) -> bool:
    """Exact functional equality, decided on the partial-fraction normal form."""
    return e1 == e2 or (e1 - e2).partial_fractions().is_zero()


# handy atoms
ONE = LogPolyExpr.constant(1)
LN = LogPolyExpr.monomial(1, pow_log=1)
LN2 = LogPolyExpr.monomial(1, pow_log=2)
PI2_EXPR = LogPolyExpr.monomial(PI2)


def a_pow(p: int) -> LogPolyExpr:
    return LogPolyExpr.monomial(1, pow_a=p)


def a1_pow(q: int) -> LogPolyExpr:
    return LogPolyExpr.monomial(1, pow_a1=q)


def lemma_derivative(c, s: int, x: float, k: int, a: float) -> float:
    """k-th a-derivative of (a + c)/(a*x + 1)**s from its closed form.

    Binomials use the combinatorial convention C(n, j) = 0 for n < j, so k = 0
    returns the function itself.
    """
    if s < 1 or k < 0:
        raise ValueError("need s >= 1 and k >= 0")
    c = float(c)
    ax1 = a * x + 1.0
    if ax1 == 0:
        raise ZeroDivisionError("a*x + 1 vanishes")
    b1 = binomial(s + k - 1, s - 1)
    b2 = binomial(s + k - 2, s - 1)
    inner = (a + c) * x ** k * b1
    if b2:
        inner -= ax1 * x ** (k - 1) * b2
    return (-1) ** k * factorial(k) * inner / ax1 ** (k + s)


# --------------------------------------------------------------------------
# rendering and parsing

def _render_rat(r: Fraction) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    return f"({r.numerator}/{r.denominator})"


def _render_coeff(c: Pi2Coeff) -> str:
    if not c.r1:
        return _render_rat(c.r0)
    pi_part = "pi^2" if c.r1 == 1 else f"{_render_rat(c.r1)}*pi^2"
    if not c.r0:
        return pi_part
    return f"({_render_rat(c.r0)} + {_render_rat(c.r1)}*pi^2)"


def _render_factor(base: str, e: int) -> str:
    return base if e == 1 else f"{base}^{e}"


def render(e: LogPolyExpr) -> str:
    if e.is_zero():
        return "0"
    out = []
    for (s, p, q), c in e.items():
        factors = []
        if p:
            factors.append(_render_factor("a", p))
        if q:
            factors.append(_render_factor("(a+1)", q))
        if s:
            factors.append(_render_factor("ln(a)", s))
        if c == Pi2Coeff(1) and factors:
            out.append("*".join(factors))
        else:
            out.append("*".join([_render_coeff(c)] + factors))
    return " + ".join(out)


_FACTOR_RE = re.compile(r"^(a|\(a\+1\)|ln\(a\))(?:\^(-?\d+))?$")
_RAT_RE = re.compile(r"^(-?\d+)$|^\((-?\d+)/(\d+)\)$")
_MIXED_RE = re.compile(r"^\((.+) \+ (.+)\*pi\^2\)$")


def _split_top(s: str, sep: str):
    parts, depth, cur, i = [], 0, [], 0
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and s.startswith(sep, i):
            parts.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


def _parse_rat(tok: str) -> Fraction:
    m = _RAT_RE.match(tok)
    if not m:
        raise ValueError(f"bad rational {tok!r}")
    if m.group(1) is not None:
        return Fraction(int(m.group(1)))
    return Fraction(int(m.group(2)), int(m.group(3)))


def parse(text: str) -> LogPolyExpr:
    """Inverse of :func:`render`."""
    text = text.strip()
    if text == "0":
        return LogPolyExpr()
    acc: Dict[Key, Pi2Coeff] = {}
    for term in _split_top(text, " + "):
        coeff = Pi2Coeff(1)
        s = p = q = 0
        pending_pi = False
        for tok in _split_top(term.strip(), "*"):
            fm = _FACTOR_RE.match(tok)
            if fm:
                e = int(fm.group(2)) if fm.group(2) else 1
                if fm.group(1) == "a":
                    p += e
                elif fm.group(1) == "(a+1)":
                    q += e
                else:
                    s += e
            elif tok == "pi^2":
                pending_pi = True
            elif _MIXED_RE.match(tok):
                mm = _MIXED_RE.match(tok)
                coeff = coeff * Pi2Coeff(_parse_rat(mm.group(1)), _parse_rat(mm.group(2)))
            else:
                coeff = coeff * _parse_rat(tok)
        if pending_pi:
            coeff = coeff * PI2
        _accumulate(acc, (s, p, q), coeff)
    return LogPolyExpr(acc)
