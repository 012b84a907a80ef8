"""Second-order Abel equation: Lagrangians, energy, symplectic form and the
non-Cartan symmetry, all checked exactly with :class:`PowerExpression`.

Coordinates are ``x = x1`` and ``v = x2``; ``a = x3`` appears off shell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .dynamics import build_gamma
from .hierarchy import OperatorKind, force
from .polycore import JetPolynomial, K, T, X, parse_polynomial
from .powerexpr import (
    INDETERMINATE,
    PowerExpression,
    total_time_derivative,
)

log = logging.getLogger(__name__)

XV = X(1)
VV = X(2)
AV = X(3)

x = JetPolynomial.var(XV)
v = JetPolynomial.var(VV)
a = JetPolynomial.var(AV)
k = JetPolynomial.var(K)

P1 = v + k * x**3  # v + k x^3
Q1 = v * 3 + k * x**3  # 3v + k x^3
F2 = force(OperatorKind.ABEL, 2)  # -4 k x^2 v - k^2 x^5


class NonConstantEnergyAction(ArithmeticError):
    pass


class InvalidExponent(ValueError):
    pass


def abel_lagrangian() -> PowerExpression:
    """``(v + k x^3)^-2``."""
    return PowerExpression.power(P1, -2)


def alternative_lagrangian() -> PowerExpression:
    """``(3v + k x^3)^(2/3)``."""
    return PowerExpression.power(Q1, Fraction(2, 3))


def riccati_lagrangian() -> PowerExpression:
    """``(v + k x^2)^-1``, whose Euler-Lagrange equation is the second-order
    Riccati member."""
    return PowerExpression.power(v + k * x**2, -1)


def _is_zero(e: PowerExpression, what: str) -> bool:
    result = e.is_zero()
    if result is INDETERMINATE:
        log.warning("zero test for %s is indeterminate: %s", what, e.render("named"))
        return False
    return result


def _check_xvt(e: PowerExpression) -> None:
    extra = e.variables() - {XV, VV, T, K}
    if extra:
        raise ValueError("expression must depend on x, v, t (and k) only")


def euler_lagrange_residual(lagrangian: PowerExpression) -> PowerExpression:
    """``d/dt(dL/dv) - dL/dx`` as an expression in x, v, a, t."""
    _check_xvt(lagrangian)
    return total_time_derivative(lagrangian.diff(VV), 2) - lagrangian.diff(XV)


def on_shell_reduce(
    e: PowerExpression, n: int = 2, kind: "OperatorKind | str" = OperatorKind.ABEL
) -> PowerExpression:
    """Replace ``x_{n+1}`` by the force ``F_n`` of the order-``n`` member."""
    return e.substitute(X(n + 1), force(kind, n))


def helmholtz_residual(g: PowerExpression) -> PowerExpression:
    """``v g_x - (4 k x^2 v + k^2 x^5) g_v - 4 k x^2 g``."""
    if g.variables() - {XV, VV, K}:
        raise ValueError("multiplier must depend on x and v only")
    return g.diff(XV) * v + g.diff(VV) * F2 + g * F2.diff(VV)


def helmholtz_check(g: PowerExpression) -> bool:
    return _is_zero(helmholtz_residual(g), "Helmholtz condition")


def lagrangian_energy(lagrangian: PowerExpression) -> PowerExpression:
    """``v dL/dv - L``."""
    _check_xvt(lagrangian)
    return lagrangian.diff(VV) * v - lagrangian


def abel_energy() -> PowerExpression:
    return lagrangian_energy(abel_lagrangian())


def family_lagrangian(u: JetPolynomial, m) -> PowerExpression:
    return PowerExpression.power(v + k * u, -Fraction(m))


def family_equation(u: JetPolynomial, m) -> JetPolynomial:
    """``a + (2+m)/(1+m) k U_x v + 1/(1+m) k^2 U U_x + k U_t``."""
    m = Fraction(m)
    ux = u.diff(XV)
    return (
        a
        + k * ux * v * ((2 + m) / (1 + m))
        + k**2 * u * ux * (1 / (1 + m))
        + k * u.diff(T)
    )


def family_equation_check(u: JetPolynomial, m) -> bool:
    """The EL expression of ``(v + kU)^-m`` equals
    ``m (m+1) (v + kU)^-(m+2)`` times the family equation."""
    m = Fraction(m)
    if m == -1:
        raise InvalidExponent("m = -1 gives a Lagrangian linear in v")
    if u.variables() - {XV, T}:
        raise ValueError("U must depend on x and t only")
    residual = euler_lagrange_residual(family_lagrangian(u, m))
    base = v + k * u
    expected = PowerExpression.power(base, -(m + 2), family_equation(u, m) * (m * (m + 1)))
    return _is_zero(residual - expected, f"family equation U={u}, m={m}")


def symplectic_density(scale=6) -> PowerExpression:
    return PowerExpression.power(P1, -4, scale)


def symplectic_relation_check(scale=6, k_value=None) -> bool:
    """``i(Gamma) omega = dE`` with ``omega = W dx^dv``: ``W v = E_v`` and
    ``-W F = E_x``."""
    w = symplectic_density(scale)
    energy = abel_energy()
    f2 = PowerExpression.poly(F2)
    if k_value is not None:
        kv = JetPolynomial.const(Fraction(k_value))
        w, energy, f2 = (e.substitute(K, kv) for e in (w, energy, f2))
    v_ok = _is_zero(w * v - energy.diff(VV), "symplectic v-component")
    x_ok = _is_zero(-(w * f2) - energy.diff(XV), "symplectic x-component")
    return v_ok and x_ok


def t1_function() -> PowerExpression:
    """``x / (v + k x^3)``."""
    return PowerExpression.power(P1, -1, x)


def symmetry_z1() -> tuple:
    """Components ``(Z^x, Z^v)`` of ``-(1/6) P1^2 (x d/dx + (v - 2k x^3) d/dv)``."""
    pref = P1**2 * Fraction(-1, 6)
    return PowerExpression.poly(pref * x), PowerExpression.poly(pref * (v - k * x**3 * 2))


def _apply(field_: tuple, e: PowerExpression) -> PowerExpression:
    zx, zv = field_
    return e.diff(XV) * zx + e.diff(VV) * zv


def bracket(z: tuple, g: tuple) -> tuple:
    """Lie bracket ``[Z, G]`` of planar fields given as component pairs."""
    return tuple(_apply(z, gi) - _apply(g, zi) for zi, gi in zip(z, g))


@dataclass(frozen=True)
class SymmetryReport:
    commutes: bool
    energy_action: Fraction
    hamiltonian_rel: bool
    symplectic_sym: bool


def noncartan_symmetry_check() -> SymmetryReport:
    z = symmetry_z1()
    gamma = (PowerExpression.poly(v), PowerExpression.poly(F2))
    commutes = all(_is_zero(c, "[Z1, Gamma]") for c in bracket(z, gamma))

    action = _apply(z, abel_energy()).constant_value()
    if action is None:
        raise NonConstantEnergyAction("Z1(E) does not reduce to a constant")

    w = symplectic_density()
    t1 = t1_function()
    hamiltonian = _is_zero(w * z[0] - t1.diff(VV), "i(Z1) omega, v-component") and _is_zero(
        -(w * z[1]) - t1.diff(XV), "i(Z1) omega, x-component"
    )
    div_z = z[0].diff(XV) + z[1].diff(VV)
    symplectic = _is_zero(_apply(z, w) + w * div_z, "L_Z1 omega")
    return SymmetryReport(commutes, action, hamiltonian, symplectic)


def generator_chain_check(numerator: JetPolynomial | None = None, k_value=None) -> bool:
    """``Gamma(N / P1) = 1`` and ``Gamma_t(N / P1 - t) = 0`` on cleared
    denominators; ``N`` defaults to x."""
    num = x if numerator is None else numerator
    den = P1
    gamma = build_gamma(OperatorKind.ABEL, 2)
    if k_value is not None:
        kv = JetPolynomial.const(Fraction(k_value))
        num, den = num.substitute(K, kv), den.substitute(K, kv)
        gamma = type(gamma)(tuple(c.substitute(K, kv) for c in gamma.components))
    first = gamma(num) * den - num * gamma(den) == den * den
    t = JetPolynomial.var(T)
    shifted = num - t * den
    gt = gamma.suspend()
    second = gt(shifted) * den - shifted * gt(den) == JetPolynomial()
    return first and second


def lagrangian_from_multiplier(g: PowerExpression) -> PowerExpression:
    """Integrate ``g`` twice in v, both integration constants set to zero.

    Handles single terms ``c * b**e`` with ``b`` linear in v and ``c`` free
    of v, which covers the Darboux-power multipliers.
    """
    if len(g) != 1:
        raise ValueError("only single-term multipliers are supported")
    (coeff, factors), = g.terms
    if len(factors) != 1 or coeff.diff(VV):
        raise ValueError("multiplier must be c * b**e with c independent of v")
    (base, e), = factors
    slope = base.diff(VV)
    if not slope.is_constant() or slope.is_zero() or base.diff(VV).diff(VV):
        raise ValueError("base must be linear in v with constant slope")
    beta = Fraction(slope.constant_term())
    if e in (-1, -2):
        raise ValueError("logarithmic antiderivative")
    factor = 1 / ((e + 1) * (e + 2) * beta**2)
    return PowerExpression.power(base, e + 2, coeff * factor)


def same_lagrangian_up_to_gauge(l1: PowerExpression, l2: PowerExpression) -> bool:
    """True when ``l1 - c*l2`` has vanishing second v-derivative for the
    constant c fixed by the ratio of the Hessians."""
    h1, h2 = l1.diff(VV).diff(VV), l2.diff(VV).diff(VV)
    for c1, key1 in h1.simplify().terms:
        for c2, key2 in h2.simplify().terms:
            if key1 == key2 and c1.is_constant() and c2.is_constant():
                c = Fraction(c1.constant_term()) / Fraction(c2.constant_term())
                return _is_zero((l1 - l2 * c).diff(VV).diff(VV), "gauge comparison")
    return False


ABEL_EQUATION = parse_polynomial("a + 4*k*x^2*v + k^2*x^5")
RICCATI_EQUATION = parse_polynomial("a + 3*k*x*v + k^2*x^3")
