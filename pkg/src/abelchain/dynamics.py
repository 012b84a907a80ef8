"""Phase-space vector fields of the hierarchy and their Darboux structure."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .hierarchy import OperatorKind, hierarchy_member, multiplier_term
from .polycore import (
    DEFAULT_MAX_ORDER,
    JetOrderOverflow,
    JetPolynomial,
    K,
    NotDivisible,
    T,
    X,
    exact_divide,
    is_jet,
    jet_index,
    monomial_key,
    partial_derivative,
)
from .powerexpr import INDETERMINATE, IndeterminateZeroTest, PowerExpression


class VariableOutOfRange(ValueError):
    pass


class NotDarboux(ArithmeticError):
    pass


class ZeroPolynomial(ValueError):
    pass


class NoSolution(ArithmeticError):
    pass


class ChainIdentityViolation(AssertionError):
    """An identity that must hold by construction failed: an implementation bug."""


@dataclass(frozen=True)
class VectorField:
    """``sum_i components[i] * d/dx_{i+1}`` (plus ``d/dt`` when suspended)."""

    components: tuple
    suspended: bool = False
    label: str = ""
    max_order: int = DEFAULT_MAX_ORDER

    @property
    def dimension(self) -> int:
        return len(self.components)

    def suspend(self) -> "VectorField":
        return VectorField(self.components, True, self.label, self.max_order)

    def unsuspend(self) -> "VectorField":
        return VectorField(self.components, False, self.label, self.max_order)

    def coordinates(self) -> list:
        return [X(i, self.max_order) for i in range(1, self.dimension + 1)]

    def _check_range(self, variables) -> None:
        for v in variables:
            if is_jet(v) and jet_index(v) > self.dimension:
                raise VariableOutOfRange(
                    f"x{jet_index(v)} is not a coordinate of a {self.dimension}-dimensional field"
                )

    def __call__(self, f):
        if isinstance(f, PowerExpression):
            return lie_derivative_pe(self, f)
        return lie_derivative(self, f)


def build_gamma(
    kind: "OperatorKind | str", n: int, max_order: int = DEFAULT_MAX_ORDER
) -> VectorField:
    """``x2 d/dx1 + ... + xn d/dx_{n-1} + F_n d/dx_n`` for the order-``n`` member."""
    kind = OperatorKind.parse(kind)
    if n < 1:
        raise ValueError("dimension must be positive")
    if n + 1 > max_order:
        raise JetOrderOverflow(f"order {n} needs x{n + 1} > x{max_order}")
    comps = [JetPolynomial.var(X(i + 1, max_order)) for i in range(1, n)]
    comps.append(hierarchy_member(kind, n, max_order).force)
    return VectorField(tuple(comps), False, f"{kind.value}-{n}", max_order)


def lie_derivative(field_: VectorField, f: JetPolynomial) -> JetPolynomial:
    field_._check_range(f.variables())
    out = partial_derivative(f, T) if field_.suspended else JetPolynomial()
    for var, comp in zip(field_.coordinates(), field_.components):
        d = partial_derivative(f, var)
        if d:
            out = out + comp * d
    return out


def lie_derivative_pe(field_: VectorField, e: PowerExpression) -> PowerExpression:
    field_._check_range(e.variables())
    out = e.diff(T) if field_.suspended else PowerExpression()
    for var, comp in zip(field_.coordinates(), field_.components):
        d = e.diff(var)
        if len(d):
            out = out + d * comp
    return out


def divergence(field_: VectorField) -> JetPolynomial:
    out = JetPolynomial()
    for var, comp in zip(field_.coordinates(), field_.components):
        out = out + partial_derivative(comp, var)
    return out


@dataclass(frozen=True)
class DarbouxPair:
    polynomial: JetPolynomial
    cofactor: JetPolynomial
    field: VectorField = field(repr=False)


def check_darboux(field_: VectorField, d: JetPolynomial) -> DarbouxPair:
    """Return the Darboux pair of ``d`` or raise :class:`NotDarboux`."""
    if d.is_zero():
        raise ZeroPolynomial("the zero polynomial is not a Darboux polynomial")
    image = lie_derivative(field_, d)
    try:
        cofactor = exact_divide(image, d)
    except NotDivisible:
        raise NotDarboux(f"X({d}) is not a polynomial multiple of it") from None
    return DarbouxPair(d, cofactor, field_)


@lru_cache(maxsize=None)
def _chain(kind: OperatorKind, n: int, max_order: int) -> tuple:
    polys = tuple(hierarchy_member(kind, r, max_order).expression for r in range(n))
    gamma = build_gamma(kind, n, max_order)
    shift = multiplier_term(kind, max_order)
    for r, p in enumerate(polys):
        lhs = lie_derivative(gamma, p) + shift * p
        rhs = polys[r + 1] if r + 1 < n else JetPolynomial()
        if lhs != rhs:
            raise ChainIdentityViolation(f"chain identity fails at n={n}, r={r}")
    return polys


def chain_polynomials(
    kind: "OperatorKind | str", n: int, max_order: int = DEFAULT_MAX_ORDER
) -> list:
    """``[P_0, ..., P_{n-1}]`` with ``Gamma(P_r) + k x1^s P_r = P_{r+1}`` and
    ``P_{n-1}`` annihilated, checked before returning."""
    kind = OperatorKind.parse(kind)
    if n < 1:
        raise ValueError("dimension must be positive")
    if n + 1 > max_order:
        raise JetOrderOverflow(f"order {n} needs x{n + 1} > x{max_order}")
    return list(_chain(kind, n, max_order))


def abel_chain_polynomials(n: int, max_order: int = DEFAULT_MAX_ORDER) -> list:
    return chain_polynomials(OperatorKind.ABEL, n, max_order)


def _time_weights(a: int) -> list:
    # (-t)^j / j!
    t = JetPolynomial.var(T)
    return [t**j * Fraction((-1) ** j, math.factorial(j)) for j in range(a)]


@lru_cache(maxsize=None)
def _darboux_family(kind: OperatorKind, n: int, max_order: int) -> tuple:
    polys = _chain(kind, n, max_order)
    gamma_t = build_gamma(kind, n, max_order).suspend()
    cofactor = -multiplier_term(kind, max_order)
    out = []
    for a in range(1, n + 1):
        d = JetPolynomial()
        for j, w in enumerate(_time_weights(a)):
            d = d + w * polys[n - a + j]
        if lie_derivative(gamma_t, d) != cofactor * d:
            raise ChainIdentityViolation(f"time-dependent Darboux identity fails at n={n}, a={a}")
        out.append(d)
    return tuple(out)


def time_dependent_darboux(
    n: int, kind: "OperatorKind | str" = OperatorKind.ABEL, max_order: int = DEFAULT_MAX_ORDER
) -> list:
    """``[D_1, ..., D_n]`` with ``D_a = sum_{j<a} (-t)^j/j! * P_{n-a+j}``; every
    ``D_a`` has cofactor ``-k x1^s`` for the suspended field."""
    kind = OperatorKind.parse(kind)
    if n < 1:
        raise ValueError("dimension must be positive")
    chain_polynomials(kind, n, max_order)
    return list(_darboux_family(kind, n, max_order))


def _solve_exact(columns: list, rhs: dict, monomials: list):
    """Solve ``sum_j nu_j columns[j] = rhs`` over the monomial basis exactly.

    Returns the unique solution as a list, or None if inconsistent. The
    columns are assumed linearly independent.
    """
    rows = [[Fraction(col.get(m, 0)) for col in columns] + [Fraction(rhs.get(m, 0))] for m in monomials]
    ncol = len(columns)
    pivots = []
    r = 0
    for c in range(ncol):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            return None
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    return [rows[i][-1] for i in range(ncol)]


def solve_multiplier_exponents(field_: VectorField, pairs: Sequence[DarbouxPair]) -> list:
    """Exponents ``nu`` with ``sum nu_i f_i = -div X`` (sparsest solution, ties
    broken towards earlier pairs)."""
    if not pairs:
        raise ValueError("need at least one Darboux pair")
    for p in pairs:
        if p.field != field_:
            raise ValueError("Darboux pair was verified against a different vector field")
    target = (-divergence(field_)).as_dict()
    cofactors = [p.cofactor.as_dict() for p in pairs]
    monomials = sorted(
        set(target).union(*[set(c) for c in cofactors]), key=monomial_key
    )
    if not target:
        return [Fraction(0)] * len(pairs)
    for size in range(1, len(pairs) + 1):
        for support in itertools.combinations(range(len(pairs)), size):
            sol = _solve_exact([cofactors[i] for i in support], target, monomials)
            if sol is None or any(s == 0 for s in sol):
                continue
            out = [Fraction(0)] * len(pairs)
            for i, s in zip(support, sol):
                out[i] = s
            return out
    raise NoSolution("no exponents satisfy the multiplier condition")


def multiplier_residual(field_: VectorField, r: PowerExpression) -> PowerExpression:
    """``X(R) + R div X``."""
    return lie_derivative_pe(field_, r) + r * divergence(field_)


def verify_multiplier(field_: VectorField, r: PowerExpression) -> bool:
    result = multiplier_residual(field_, r).is_zero()
    if result is INDETERMINATE:
        raise IndeterminateZeroTest("multiplier identity could not be decided")
    return result


def darboux_multiplier(pairs: Sequence[DarbouxPair], exponents: Sequence) -> PowerExpression:
    """``prod D_i**nu_i`` for the given pairs."""
    return PowerExpression(
        [(1, tuple((p.polynomial, Fraction(e)) for p, e in zip(pairs, exponents) if e))]
    )
