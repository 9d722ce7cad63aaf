"""Fuzzed algebraic properties of the expression kernel."""

from decimal import Decimal, localcontext
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from logint.kernel import LogPolyExpr, Pi2Coeff, equivalent, parse, render

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
coeff = st.builds(Pi2Coeff, small, st.one_of(st.just(Fraction(0)), small))
# keep the pi^2 part out of one factor so products stay in the class
rational_coeff = st.builds(Pi2Coeff, small, st.just(Fraction(0)))


def exprs(c=coeff, max_terms=4):
    term = st.builds(
        lambda cc, s, p, q: LogPolyExpr.monomial(cc, pow_a=p, pow_a1=q, pow_log=s),
        c, st.integers(0, 3), st.integers(-3, 3), st.integers(-3, 3),
    )
    return st.lists(term, min_size=0, max_size=max_terms).map(lambda ts: sum(ts, LogPolyExpr()))


scalars = st.fractions(min_value=-4, max_value=4, max_denominator=5)
orders = st.integers(0, 3)
points = st.sampled_from([Fraction(1, 3), Fraction(7, 10), Fraction(1), Fraction(13, 8), Fraction(4)])

N = 300


@settings(max_examples=N, deadline=None)
@given(exprs(), exprs(), scalars, scalars, orders)
def test_differentiation_is_linear(e1, e2, s, t, k):
    lhs = (e1 * s + e2 * t).differentiate(k)
    rhs = e1.differentiate(k) * s + e2.differentiate(k) * t
    assert lhs == rhs


@settings(max_examples=N, deadline=None)
@given(exprs(), orders, orders)
def test_derivative_orders_compose(e, i, j):
    assert e.differentiate(i).differentiate(j) == e.differentiate(i + j)


@settings(max_examples=N, deadline=None)
@given(exprs(), exprs(rational_coeff))
def test_product_rule(e1, e2):
    lhs = (e1 * e2).differentiate()
    rhs = e1.differentiate() * e2 + e1 * e2.differentiate()
    assert equivalent(lhs, rhs)


@settings(max_examples=N, deadline=None)
@given(exprs())
def test_reciprocal_substitution_is_an_involution(e):
    assert e.substitute_reciprocal().substitute_reciprocal() == e


@settings(max_examples=N, deadline=None)
@given(exprs(), points)
def test_reciprocal_substitution_matches_evaluation(e, a):
    lhs = e.substitute_reciprocal().evaluate_decimal(a)
    rhs = e.evaluate_decimal(1 / a)
    assert abs(lhs - rhs) <= Decimal("1e-35") * (1 + abs(rhs))


@settings(max_examples=N, deadline=None)
@given(exprs(max_terms=3), points, st.integers(1, 2))
def test_derivative_matches_finite_difference(e, a, k):
    # offsets stay exact Fractions; the 50-digit evaluation leaves ~1e-26 roundoff
    h = Fraction(1, 10 ** 12)
    f = e.evaluate_decimal
    with localcontext() as ctx:
        ctx.prec = 50
        hd = Decimal(h.numerator) / h.denominator
        if k == 1:
            fd = (f(a + h) - f(a - h)) / (2 * hd)
        else:
            fd = (f(a + h) - 2 * f(a) + f(a - h)) / hd ** 2
        exact = e.differentiate(k).evaluate_decimal(a)
        assert abs(fd - exact) <= Decimal("1e-12") * (1 + abs(exact) + abs(f(a)))


@settings(max_examples=N, deadline=None)
@given(exprs())
def test_partial_fraction_form_is_faithful(e):
    assert equivalent(e, e)
    pf = e.partial_fractions()
    for a in (Fraction(2, 7), Fraction(5, 2)):
        assert abs(pf.evaluate_decimal(a) - e.evaluate_decimal(a)) <= Decimal("1e-35") * (1 + abs(e.evaluate_decimal(a)))


@settings(max_examples=N, deadline=None)
@given(exprs())
def test_render_parse_round_trip(e):
    assert parse(render(e)) == e
