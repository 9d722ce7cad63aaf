"""Finite-difference oracles, evaluated in exact rational arithmetic.

Using Fractions removes round-off entirely, so the only error left is the
O(h^2) truncation of the central difference.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .exact import binomial, to_rational


def central_difference(fn: Callable[[Fraction], Fraction], a, order: int, h="1/10000") -> Fraction:
    """order-th central difference quotient of fn at a with step h."""
    a = to_rational(a)
    h = Fraction(h)
    if order == 0:
        return fn(a)
    total = Fraction(0)
    for i in range(order + 1):
        total += (-1) ** i * binomial(order, i) * fn(a + (Fraction(order, 2) - i) * h)
    return total / h ** order


def rational_power_quotient(c, s: int, x) -> Callable[[Fraction], Fraction]:
    """a -> (a + c)/(a x + 1)^s over the rationals."""
    c, x = to_rational(c), to_rational(x)

    def fn(a: Fraction) -> Fraction:
        return (a + c) / (a * x + 1) ** s

    return fn


def lemma_fd(c, s: int, x, k: int, a) -> float:
    """k-th derivative of (a + c)/(a x + 1)^s by central differences."""
    return float(central_difference(rational_power_quotient(c, s, x), a, k))
