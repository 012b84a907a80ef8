"""Time-polynomial first integrals built from the chain polynomials.

Conservation is always checked on numerators after clearing denominators,
so every statement holds away from the singular surface ``P_{n-1} = 0``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .dynamics import (
    ChainIdentityViolation,
    VectorField,
    build_gamma,
    chain_polynomials,
    lie_derivative,
    time_dependent_darboux,
)
from .hierarchy import OperatorKind
from .polycore import (
    DEFAULT_MAX_ORDER,
    JetPolynomial,
    K,
    T,
    X,
    evaluate,
    partial_derivative,
    render,
)


class SingularSample(ValueError):
    pass


@dataclass(frozen=True)
class RationalSurface:
    """``numerator / denominator`` with the denominator's leading coefficient positive."""

    numerator: JetPolynomial
    denominator: JetPolynomial

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ZeroDivisionError("rational surface with zero denominator")
        if self.denominator.leading_term()[1] < 0:
            object.__setattr__(self, "numerator", -self.numerator)
            object.__setattr__(self, "denominator", -self.denominator)

    def same_as(self, other: "RationalSurface") -> bool:
        return self.numerator * other.denominator == other.numerator * self.denominator

    def is_one(self) -> bool:
        return self.numerator == self.denominator

    def reciprocal(self) -> "RationalSurface":
        return RationalSurface(self.denominator, self.numerator)

    def __mul__(self, other: "RationalSurface") -> "RationalSurface":
        return RationalSurface(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    def derivative_numerator(self, field_: VectorField) -> JetPolynomial:
        """Numerator of ``X(N/D)`` over ``D**2``."""
        n, d = self.numerator, self.denominator
        return lie_derivative(field_, n) * d - n * lie_derivative(field_, d)

    def partial(self, var: int) -> tuple:
        """``(numerator, denominator)`` of the partial derivative."""
        n, d = self.numerator, self.denominator
        return partial_derivative(n, var) * d - n * partial_derivative(d, var), d * d

    def evaluate(self, assignment: Mapping[int, object]):
        num = evaluate(self.numerator, assignment)
        den = evaluate(self.denominator, assignment)
        if isinstance(num, float) or isinstance(den, float):
            return num / den
        return Fraction(num) / Fraction(den)

    def render(self, style: str = "indexed") -> str:
        return f"({render(self.numerator, style)})/({render(self.denominator, style)})"


@dataclass(frozen=True)
class TimePolynomialIntegral:
    """``sum_j coefficient_j * t**power_j * surface_j``; a surface of None is 1."""

    order: int
    terms: tuple

    @property
    def t_degree(self) -> int:
        return max(p for _, p, _ in self.terms)

    def leading_coefficient(self) -> Fraction:
        return next(c for c, p, _ in self.terms if p == self.t_degree)

    def as_surface(self) -> RationalSurface:
        """Combine over the common denominator shared by every T-function."""
        dens = {s.denominator for _, _, s in self.terms if s is not None}
        if len(dens) != 1:
            raise ValueError("terms do not share a common denominator")
        den = dens.pop()
        t = JetPolynomial.var(T)
        num = JetPolynomial()
        for c, p, s in self.terms:
            top = s.numerator if s is not None else den
            num = num + top * t**p * c
        return RationalSurface(num, den)

    def evaluate(self, assignment: Mapping[int, object]):
        s = self.as_surface()
        return s.evaluate(assignment)


def _cross_derivative_identity(field_: VectorField, f: RationalSurface, g: RationalSurface) -> bool:
    """``X(f) == g`` for rational surfaces, checked as a polynomial identity."""
    lhs = f.derivative_numerator(field_) * g.denominator
    rhs = g.numerator * f.denominator * f.denominator
    return lhs == rhs


def t_sequence(
    n: int, kind: "OperatorKind | str" = OperatorKind.ABEL, max_order: int = DEFAULT_MAX_ORDER
) -> list:
    """``[T_1, ..., T_n]`` with ``T_r = P_{r-1}/P_{n-1}``; ``Gamma(T_r) = T_{r+1}``
    and ``Gamma(T_n) = 0`` are checked before returning."""
    polys = chain_polynomials(kind, n, max_order)
    gamma = build_gamma(kind, n, max_order)
    den = polys[-1]
    seq = [RationalSurface(p, den) for p in polys]
    for r in range(n - 1):
        if not _cross_derivative_identity(gamma, seq[r], seq[r + 1]):
            raise ChainIdentityViolation(f"Gamma(T_{r + 1}) != T_{r + 2} at n={n}")
    if not seq[-1].is_one() or seq[-1].derivative_numerator(gamma):
        raise ChainIdentityViolation(f"T_{n} is not the constant 1 at n={n}")
    return seq


def j_integrals(
    n: int, kind: "OperatorKind | str" = OperatorKind.ABEL, max_order: int = DEFAULT_MAX_ORDER
) -> list:
    """``[J_1, ..., J_{n-1}]`` with ``J_r = sum_{j<=r} (-t)^j/j! T_{n-r+j}``."""
    if n < 2:
        raise ValueError("time-polynomial integrals need n >= 2")
    seq = t_sequence(n, kind, max_order)
    gamma_t = build_gamma(kind, n, max_order).suspend()
    out = []
    for r in range(1, n):
        terms = []
        for j in range(r + 1):
            idx = n - r + j
            surface = None if idx == n else seq[idx - 1]
            terms.append((Fraction((-1) ** j, math.factorial(j)), j, surface))
        integral = TimePolynomialIntegral(r, tuple(terms))
        if integral.as_surface().derivative_numerator(gamma_t):
            raise ChainIdentityViolation(f"J_t{r} is not conserved at n={n}")
        out.append(integral)
    return out


def j_matrix(
    n: int, kind: "OperatorKind | str" = OperatorKind.ABEL, max_order: int = DEFAULT_MAX_ORDER
) -> list:
    """``[[D_a / D_b]]``, each entry checked conserved by the suspended field."""
    ds = time_dependent_darboux(n, kind, max_order)
    gamma_t = build_gamma(kind, n, max_order).suspend()
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            s = RationalSurface(ds[a], ds[b])
            if s.derivative_numerator(gamma_t):
                raise ChainIdentityViolation(f"J_t{a + 1}{b + 1} is not conserved at n={n}")
            row.append(s)
        rows.append(row)
    return rows


def jacobian(
    n: int,
    sample: Mapping[int, float],
    t: float,
    kind: "OperatorKind | str" = OperatorKind.ABEL,
    max_order: int = DEFAULT_MAX_ORDER,
) -> np.ndarray:
    """``(n-1) x n`` matrix of ``d J_r / d x_i`` at the sample."""
    polys = chain_polynomials(kind, n, max_order)
    point = {**{v: float(x) for v, x in sample.items()}, T: float(t)}
    den = evaluate(polys[-1], point)
    if abs(den) <= 1e-6:
        raise SingularSample(f"|P_{n - 1}| = {abs(den):.3g} at the sample")
    surfaces = [j.as_surface() for j in j_integrals(n, kind, max_order)]
    jac = np.empty((n - 1, n))
    for r, s in enumerate(surfaces):
        num = evaluate(s.numerator, point)
        den = evaluate(s.denominator, point)
        for i in range(1, n + 1):
            var = X(i, max_order)
            dn = evaluate(partial_derivative(s.numerator, var), point)
            dd = evaluate(partial_derivative(s.denominator, var), point)
            # quotient rule kept factored: less cancellation than the expanded numerator
            jac[r, i - 1] = dn / den - (num / den) * (dd / den)
    return jac


def equilibrate(a: np.ndarray, sweeps: int = 3) -> np.ndarray:
    a = np.array(a, dtype=float)
    for _ in range(sweeps):
        rows = np.max(np.abs(a), axis=1, keepdims=True)
        a = a / np.where(rows > 0, rows, 1.0)
        cols = np.max(np.abs(a), axis=0, keepdims=True)
        a = a / np.where(cols > 0, cols, 1.0)
    return a


def independence_rank(
    n: int,
    sample: Mapping[int, float],
    t: float,
    kind: "OperatorKind | str" = OperatorKind.ABEL,
    max_order: int = DEFAULT_MAX_ORDER,
) -> int:
    """Numerical rank of the Jacobian of the J-integrals with respect to x1..xn.

    Rows and columns are first rescaled to unit max-norm. Diagonal scaling
    leaves the rank unchanged but removes the spread of magnitudes caused by
    the weighted homogeneity of the chain polynomials.
    """
    jac = equilibrate(jacobian(n, sample, t, kind, max_order))
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > 1e-8 * sv[0]))


def exact_rank(
    n: int,
    sample: Mapping[int, object],
    t,
    kind: "OperatorKind | str" = OperatorKind.ABEL,
    max_order: int = DEFAULT_MAX_ORDER,
) -> int:
    """Rank of the same Jacobian in exact rational arithmetic.

    Only meaningful at rational samples; float entries are converted
    exactly, so integer boxes give an exact answer.
    """
    point = {v: Fraction(x) for v, x in sample.items()}
    point[T] = Fraction(t)
    polys = chain_polynomials(kind, n, max_order)
    if evaluate(polys[-1], point) == 0:
        raise SingularSample(f"P_{n - 1} vanishes at the sample")
    rows = []
    for integral in j_integrals(n, kind, max_order):
        s = integral.as_surface()
        rows.append([Fraction(evaluate(s.partial(X(i, max_order))[0], point)) for i in range(1, n + 1)])
    rank = 0
    for c in range(n):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][c] / rows[rank][c]
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def random_samples(
    n: int,
    count: int,
    seed: int = 0,
    kind: "OperatorKind | str" = OperatorKind.ABEL,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list:
    """Seeded integer samples ``(assignment, t)`` from ``[-3, 3]`` avoiding the
    singular surface; k is drawn from the nonzero integers of the same box."""
    rng = random.Random(seed)
    den = chain_polynomials(kind, n, max_order)[-1]
    out = []
    while len(out) < count:
        point = {X(i, max_order): float(rng.randint(-3, 3)) for i in range(1, n + 1)}
        point[K] = float(rng.choice([-3, -2, -1, 1, 2, 3]))
        t = float(rng.randint(-3, 3))
        if abs(evaluate(den, point)) > 1e-6:
            out.append((point, t))
    return out
