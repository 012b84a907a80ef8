import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from abelchain.polycore import (
    DivisionByZeroPolynomial,
    JetOrderOverflow,
    JetPolynomial,
    K,
    MissingVariable,
    NotDivisible,
    T,
    X,
    evaluate,
    exact_divide,
    parse_polynomial,
    partial_derivative,
    render,
)

from conftest import assignments, polynomials

x1, x2, x3 = (JetPolynomial.var(X(i)) for i in (1, 2, 3))
k = JetPolynomial.var(K)
P1 = x2 + k * x1**3
P2 = x3 + 4 * k * x1**2 * x2 + k**2 * x1**5


def test_var_bounds():
    assert X(16) == 17
    with pytest.raises(JetOrderOverflow):
        X(17)
    with pytest.raises(JetOrderOverflow):
        X(0)
    assert X(20, max_order=20) == 21


def test_additive_inverse_and_merge():
    assert (x1 + -x1).is_zero()
    assert (P1 + k * x1**3) == x2 + 2 * k * x1**3


def test_sum_evaluation():
    point = {X(1): 1, X(2): 1, X(3): 0, K: 1}
    assert evaluate(P1 + P2, point) == 7


def test_products():
    assert (P1 * 0).is_zero()
    assert P1**2 == x2**2 + 2 * k * x1**3 * x2 + k**2 * x1**6
    assert k * x1**2 * P1 == k * x1**2 * x2 + k**2 * x1**5


def test_partials():
    assert partial_derivative(k**2 * x1**5, X(1)) == 5 * k**2 * x1**4
    assert partial_derivative(P1, X(2)) == JetPolynomial.const(1)
    f2 = -4 * k * x1**2 * x2 - k**2 * x1**5
    assert partial_derivative(f2, X(2)) == -4 * k * x1**2


def test_exact_divide_cofactors():
    assert exact_divide(-k * x1**2 * P1, P1) == -k * x1**2
    q1 = 3 * x2 + k * x1**3
    assert exact_divide(-3 * k * x1**2 * q1, q1) == -3 * k * x1**2
    with pytest.raises(NotDivisible):
        exact_divide(x1, x2)
    with pytest.raises(DivisionByZeroPolynomial):
        exact_divide(x1, JetPolynomial())


def test_evaluate_examples():
    assert evaluate(P1, {X(1): 0, X(2): 3, K: 5}) == 3
    assert evaluate(P2, {X(1): 1, X(2): 1, X(3): 1, K: 1}) == 6
    with pytest.raises(MissingVariable):
        evaluate(P1, {X(1): 1})


def test_float_evaluation_is_float():
    assert isinstance(evaluate(P1, {X(1): 0.5, X(2): 1, K: 1}), float)
    assert isinstance(evaluate(P1, {X(1): Fraction(1, 2), X(2): 1, K: 1}), Fraction)


def test_render_and_parse_roundtrip():
    text = "x3 + 4*k*x1^2*x2 + k^2*x1^5"
    assert render(P2) == text
    assert parse_polynomial(text) == P2
    assert render(P2, "named") == "a + 4*k*x^2*v + k^2*x^5"
    assert parse_polynomial("a + 4*k*x^2*v + k^2*x^5") == P2
    assert render(JetPolynomial()) == "0"
    assert parse_polynomial("(x1 + 1)/2") == (x1 + 1) * Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_polynomial("x1 / x2")


@given(polynomials())
def test_canonical_form_is_order_independent(p):
    terms = list(p.terms)
    random.Random(0).shuffle(terms)
    assert JetPolynomial(terms).terms == p.terms
    # split each coefficient into two insertions
    doubled = [(m, Fraction(c) / 2) for m, c in terms] * 2
    assert JetPolynomial(doubled) == p


@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p
    assert p * q == q * p
    assert (p - p).is_zero()


@given(polynomials(), polynomials())
def test_exact_division_roundtrip(q, d):
    if d.is_zero():
        return
    assert exact_divide(q * d, d) == q


@given(polynomials(), polynomials(), st.sampled_from([T, K, X(1), X(2), X(3)]))
def test_leibniz(p, q, v):
    lhs = partial_derivative(p * q, v)
    rhs = partial_derivative(p, v) * q + p * partial_derivative(q, v)
    assert lhs == rhs


@given(polynomials(), polynomials(), assignments())
def test_evaluation_homomorphism(p, q, point):
    assert evaluate(p * q, point) == evaluate(p, point) * evaluate(q, point)
    assert evaluate(p + q, point) == evaluate(p, point) + evaluate(q, point)


@given(polynomials())
def test_zero_assignment_gives_constant_term(p):
    point = {v: 0 for v in (T, K, X(1), X(2), X(3))}
    assert evaluate(p, point) == p.constant_term()


@given(polynomials())
def test_parse_inverts_render(p):
    assert parse_polynomial(render(p)) == p


@given(polynomials())
def test_primitive_part(p):
    if p.is_zero():
        return
    c, prim = p.primitive_part()
    assert prim * c == p
    assert prim.leading_term()[1] > 0
