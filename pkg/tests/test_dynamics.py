from fractions import Fraction

import pytest
from hypothesis import given

from abelchain.dynamics import (
    NoSolution,
    NotDarboux,
    VariableOutOfRange,
    ZeroPolynomial,
    abel_chain_polynomials,
    build_gamma,
    chain_polynomials,
    check_darboux,
    darboux_multiplier,
    divergence,
    lie_derivative,
    solve_multiplier_exponents,
    time_dependent_darboux,
    verify_multiplier,
)
from abelchain.hierarchy import OperatorKind
from abelchain.polycore import JetOrderOverflow, JetPolynomial, K, T, X, parse_polynomial
from abelchain.powerexpr import PowerExpression

from conftest import polynomials

P = parse_polynomial
x1 = JetPolynomial.var(X(1))
kx2 = P("k*x1^2")
P1 = P("x2 + k*x1^3")
Q1 = P("3*x2 + k*x1^3")


def test_build_gamma():
    g2 = build_gamma("abel", 2)
    assert g2.components == (P("x2"), P("-4*k*x1^2*x2 - k^2*x1^5"))
    g3 = build_gamma("abel", 3)
    assert g3.components[-1] == P("-5*k*x1^2*x3 - 8*k*x1*x2^2 - 9*k^2*x1^4*x2 - k^3*x1^7")
    assert build_gamma("abel", 1).components == (P("-k*x1^3"),)
    with pytest.raises(JetOrderOverflow):
        build_gamma("abel", 16)


def test_lie_derivative_examples():
    g2 = build_gamma("abel", 2)
    assert lie_derivative(g2, x1) == P("x2")
    assert lie_derivative(g2, P1) == -kx2 * P1
    d2 = time_dependent_darboux(3)[1]
    assert d2 == P("x2 + k*x1^3") - JetPolynomial.var(T) * P("x3 + 4*k*x1^2*x2 + k^2*x1^5")
    assert lie_derivative(build_gamma("abel", 3).suspend(), d2) == -kx2 * d2
    with pytest.raises(VariableOutOfRange):
        lie_derivative(g2, P("x3"))


def test_suspension_adds_time_derivative():
    g = build_gamma("abel", 2)
    t = JetPolynomial.var(T)
    assert lie_derivative(g, t).is_zero()
    assert lie_derivative(g.suspend(), t) == JetPolynomial.const(1)
    assert g.suspend().unsuspend() == g


@pytest.mark.parametrize("n", range(1, 9))
def test_divergence(n):
    assert divergence(build_gamma("abel", n)) == kx2 * (-(n + 2))
    assert divergence(build_gamma("riccati", n)) == P("k*x1") * (-(n + 1))


def test_darboux_pairs():
    g2 = build_gamma("abel", 2)
    assert check_darboux(g2, P1).cofactor == -kx2
    assert check_darboux(g2, Q1).cofactor == -3 * kx2
    with pytest.raises(NotDarboux):
        check_darboux(g2, x1)
    with pytest.raises(ZeroPolynomial):
        check_darboux(g2, JetPolynomial())


def test_chain_examples():
    assert abel_chain_polynomials(2) == [x1, P1]
    g3 = build_gamma("abel", 3)
    last = abel_chain_polynomials(3)[-1]
    assert last == P("x3 + 4*k*x1^2*x2 + k^2*x1^5")
    assert (lie_derivative(g3, last) + kx2 * last).is_zero()
    assert abel_chain_polynomials(4)[-1].coefficient([(K, 1), (X(1), 2), (X(3), 1)]) == 5


@pytest.mark.parametrize("kind", ["abel", "riccati"])
@pytest.mark.parametrize("n", range(1, 9))
def test_chain_identity(kind, n):
    gamma = build_gamma(kind, n)
    shift = P("k*x1^2") if kind == "abel" else P("k*x1")
    polys = chain_polynomials(kind, n)
    for r in range(n):
        target = polys[r + 1] if r + 1 < n else JetPolynomial()
        assert lie_derivative(gamma, polys[r]) + shift * polys[r] == target


@pytest.mark.parametrize("n", range(1, 7))
def test_time_dependent_family(n):
    ds = time_dependent_darboux(n)
    polys = abel_chain_polynomials(n)
    gt = build_gamma("abel", n).suspend()
    assert ds[0] == polys[-1]
    for a, d in enumerate(ds, start=1):
        assert lie_derivative(gt, d) == -kx2 * d
        assert d.substitute(T, JetPolynomial()) == polys[n - a]
    # cofactor-quotient principle, cross-multiplied
    for a in range(n):
        for b in range(n):
            if a != b:
                lhs = lie_derivative(gt, ds[a]) * ds[b] - ds[a] * lie_derivative(gt, ds[b])
                assert lhs.is_zero()


def test_time_dependent_third_order():
    p0, p1, p2 = abel_chain_polynomials(3)
    t = JetPolynomial.var(T)
    assert time_dependent_darboux(3)[2] == p0 - t * p1 + t**2 * p2 * Fraction(1, 2)


def test_multiplier_exponents_second_order():
    g2 = build_gamma("abel", 2)
    pa, pb = check_darboux(g2, P1), check_darboux(g2, Q1)
    assert solve_multiplier_exponents(g2, [pa]) == [-4]
    assert solve_multiplier_exponents(g2, [pb]) == [Fraction(-4, 3)]
    # underdetermined: sparsest, earliest index first
    assert solve_multiplier_exponents(g2, [pa, pb]) == [-4, 0]
    assert solve_multiplier_exponents(g2, [pb, pa]) == [Fraction(-4, 3), 0]


@pytest.mark.parametrize("n", range(2, 9))
def test_mu_n(n):
    gamma = build_gamma("abel", n)
    pair = check_darboux(gamma, abel_chain_polynomials(n)[-1])
    assert solve_multiplier_exponents(gamma, [pair]) == [-(n + 2)]


def test_multiplier_errors():
    g2 = build_gamma("abel", 2)
    g3 = build_gamma("abel", 3)
    with pytest.raises(ValueError):
        solve_multiplier_exponents(g2, [])
    with pytest.raises(ValueError):
        solve_multiplier_exponents(g3, [check_darboux(g2, P1)])


def test_no_solution_and_divergence_free():
    field_type = type(build_gamma("abel", 2))
    # x1 d/dx1 on the plane: div = 1, but x2 has cofactor 0
    dilation = field_type((P("x1"), JetPolynomial()))
    with pytest.raises(NoSolution):
        solve_multiplier_exponents(dilation, [check_darboux(dilation, P("x2"))])
    free = field_type((P("x2"), JetPolynomial()))
    assert solve_multiplier_exponents(free, [check_darboux(free, P("x2"))]) == [0]


def test_verify_multiplier():
    g2 = build_gamma("abel", 2)
    assert verify_multiplier(g2, PowerExpression.power(P1, -4))
    assert not verify_multiplier(g2, PowerExpression.power(P1, -1))
    g3t = build_gamma("abel", 3).suspend()
    d2 = time_dependent_darboux(3)[1]
    assert verify_multiplier(g3t, PowerExpression.power(d2, -5))
    pair = check_darboux(g2, Q1)
    assert verify_multiplier(g2, darboux_multiplier([pair], [Fraction(-4, 3)]))
    assert verify_multiplier(g2, PowerExpression.power(P1, -4, 7))


@given(polynomials(), polynomials())
def test_lie_derivative_is_derivation(f, g):
    gamma = build_gamma("abel", 3).suspend()
    lhs = lie_derivative(gamma, f * g)
    assert lhs == lie_derivative(gamma, f) * g + f * lie_derivative(gamma, g)
