"""Riccati and Abel hierarchies generated by repeated operator application.

On the jet space the time derivative acts as ``d/dt + sum_i x_{i+1} d/dx_i``;
the Riccati operator adds ``k*x1`` and the Abel operator adds ``k*x1^2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .polycore import (
    DEFAULT_MAX_ORDER,
    JetOrderOverflow,
    JetPolynomial,
    K,
    T,
    X,
    jet_index,
    is_jet,
    partial_derivative,
)


class OperatorKind(enum.Enum):
    RICCATI = "riccati"
    ABEL = "abel"

    @property
    def power(self) -> int:
        return 1 if self is OperatorKind.RICCATI else 2

    @classmethod
    def parse(cls, name: "str | OperatorKind") -> "OperatorKind":
        if isinstance(name, cls):
            return name
        return cls(name.lower())


class NonTimeCoefficient(ValueError):
    pass


def multiplier_term(kind: OperatorKind, max_order: int = DEFAULT_MAX_ORDER) -> JetPolynomial:
    """``k*x1^s``: the nonlinear part of the operator."""
    return JetPolynomial({((K, 1), (X(1, max_order), kind.power)): 1})


def total_derivative(f: JetPolynomial, max_order: int = DEFAULT_MAX_ORDER) -> JetPolynomial:
    """Formal time derivative on the jet space."""
    top = f.max_jet_index()
    if top + 1 > max_order:
        raise JetOrderOverflow(
            f"derivative of a polynomial in x1..x{top} needs x{top + 1} > x{max_order}"
        )
    out = partial_derivative(f, T)
    for i in range(1, top + 1):
        d = partial_derivative(f, X(i, max_order))
        if d:
            out = out + d * JetPolynomial.var(X(i + 1, max_order))
    return out


def apply_operator(
    kind: OperatorKind, f: JetPolynomial, max_order: int = DEFAULT_MAX_ORDER
) -> JetPolynomial:
    kind = OperatorKind.parse(kind)
    return total_derivative(f, max_order) + multiplier_term(kind, max_order) * f


@dataclass(frozen=True)
class HierarchyMember:
    kind: OperatorKind
    order: int
    expression: JetPolynomial
    force: JetPolynomial

    def to_json(self, style: str = "indexed") -> dict:
        from .polycore import render

        return {
            "kind": self.kind.value,
            "order": self.order,
            "expression": render(self.expression, style),
            "force": render(self.force, style),
        }


@lru_cache(maxsize=None)
def _expressions(kind: OperatorKind, m: int, max_order: int) -> JetPolynomial:
    if m == 0:
        return JetPolynomial.var(X(1, max_order))
    return apply_operator(kind, _expressions(kind, m - 1, max_order), max_order)


def hierarchy_member(
    kind: "OperatorKind | str", m: int, max_order: int = DEFAULT_MAX_ORDER
) -> HierarchyMember:
    """The order-``m`` member ``D^m x`` and its force ``F_m`` (so that the
    equation reads ``x_{m+1} = F_m``)."""
    kind = OperatorKind.parse(kind)
    if m < 0:
        raise ValueError("hierarchy order must be nonnegative")
    if m + 1 > max_order:
        raise JetOrderOverflow(f"order {m} needs x{m + 1} > x{max_order}")
    expr = _expressions(kind, m, max_order)
    force = JetPolynomial.var(X(m + 1, max_order)) - expr
    return HierarchyMember(kind, m, expr, force)


def force(kind: "OperatorKind | str", n: int, max_order: int = DEFAULT_MAX_ORDER) -> JetPolynomial:
    return hierarchy_member(kind, n, max_order).force


def superposition_equation(
    kind: "OperatorKind | str",
    coefficients: Sequence[JetPolynomial],
    tail: JetPolynomial,
    max_order: int = DEFAULT_MAX_ORDER,
) -> JetPolynomial:
    """``p0*D^n x + p1*D^(n-1) x + ... + p_{n-1}*D x + tail`` with ``n = len(coefficients)``.

    Every coefficient and the tail must be a polynomial in t alone.
    """
    kind = OperatorKind.parse(kind)
    if not coefficients:
        raise ValueError("need at least one coefficient")
    coeffs = [JetPolynomial._coerce(c) for c in coefficients]
    tail = JetPolynomial._coerce(tail)
    for p in (*coeffs, tail):
        if p is None:
            raise TypeError("coefficients must be polynomials or rationals")
        if p.variables() - {T}:
            raise NonTimeCoefficient(f"coefficient {p} depends on more than t")
    n = len(coeffs)
    out = tail
    for i, p in enumerate(coeffs):
        if p:
            out = out + p * hierarchy_member(kind, n - i, max_order).expression
    return out


def weight(p: JetPolynomial, kind: "OperatorKind | str") -> set:
    """Set of monomial weights; weight of x_i is ``2i-1`` (Abel) or ``i``
    (Riccati), t and k weigh nothing."""
    kind = OperatorKind.parse(kind)
    out = set()
    for mono, _ in p:
        w = 0
        for v, e in mono:
            if is_jet(v):
                i = jet_index(v)
                w += e * (2 * i - 1 if kind is OperatorKind.ABEL else i)
        out.add(w)
    return out
