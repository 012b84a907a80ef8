"""Sums of products of rational powers of polynomials.

A :class:`PowerExpression` is a finite sum ``sum_j c_j * prod_i b_i**e_ij``
where each ``c_j`` is a :class:`JetPolynomial`, each base ``b_i`` is a
primitive polynomial with positive leading coefficient, and every exponent
``e_ij`` is a rational that is either negative or non-integral (positive
integer powers are multiplied into ``c_j``). Irrational constant factors,
such as the content 2 of ``(6v + 2kx^3)**(1/3)``, are kept as prime bases
with exponents in (0, 1).

Zero testing splits the terms into classes by the fractional parts of their
exponents. Inside a class every term can be brought over the common factor
``prod_i b_i**min_i`` and the remaining polynomial combination is tested
exactly. A single surviving class means a genuinely nonzero expression; two
or more surviving classes could still cancel through algebraic relations
between the bases, which is reported as :data:`INDETERMINATE`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .polycore import (
    JetPolynomial,
    T,
    X,
    jet_index,
    is_jet,
    monomial_key,
    NotDivisible,
    exact_divide,
    evaluate as poly_evaluate,
    partial_derivative,
    render,
)


class IrrationalConstant(ValueError):
    """Even root of a negative constant: no real value."""


class IndeterminateZeroTest(ArithmeticError):
    pass


class _Indeterminate:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("an indeterminate zero test has no truth value")

    def __repr__(self):
        return "INDETERMINATE"


INDETERMINATE = _Indeterminate()


def _iroot(n: int, q: int):
    """Exact integer q-th root of ``n >= 0`` or None."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / q))) if n.bit_length() < 1000 else 1 << (n.bit_length() // q + 1)
    # Newton refinement from above
    r = max(r, 1)
    while True:
        nr = ((q - 1) * r + n // r ** (q - 1)) // q
        if nr >= r:
            break
        r = nr
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**q == n:
            return cand
    return None


def rational_power(c, e) -> Fraction:
    """``c**e`` for rationals when the result is rational (real branch)."""
    c, e = Fraction(c), Fraction(e)
    if e.denominator == 1:
        if c == 0 and e < 0:
            raise ZeroDivisionError("zero to a negative power")
        return c ** int(e)
    if c == 0:
        if e > 0:
            return Fraction(0)
        raise ZeroDivisionError("zero to a negative power")
    q = e.denominator
    sign = 1
    if c < 0:
        if q % 2 == 0:
            raise IrrationalConstant(f"even root of negative constant {c}")
        sign = -1 if e.numerator % 2 else 1
        c = -c
    num, den = _iroot(c.numerator, q), _iroot(c.denominator, q)
    if num is None or den is None:
        raise IrrationalConstant(f"{c}**{e} is not rational")
    return sign * Fraction(num, den) ** e.numerator


def _factor_int(n: int, bound: int = 10**6) -> dict:
    """Prime factorization by trial division; a cofactor left above
    ``bound**2`` is kept whole."""
    out: dict = {}
    p = 2
    while p * p <= n and p <= bound:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def constant_power(c, e) -> tuple:
    """``c**e`` as ``(rational, ((prime, frac), ...))`` with ``0 < frac < 1``.

    Writing the irrational part over primes makes it canonical: distinct
    prime-exponent vectors are linearly independent over the rationals.
    """
    c, e = Fraction(c), Fraction(e)
    try:
        return rational_power(c, e), ()
    except IrrationalConstant:
        if c < 0 and e.denominator % 2 == 0:
            raise
    sign = Fraction(1)
    if c < 0:
        sign = Fraction(-1 if e.numerator % 2 else 1)
        c = -c
    value = sign
    radicals = []
    exps: dict = {}
    for p, a in _factor_int(c.numerator).items():
        exps[p] = exps.get(p, 0) + a
    for p, a in _factor_int(c.denominator).items():
        exps[p] = exps.get(p, 0) - a
    for p in sorted(exps):
        total = exps[p] * e
        whole = math.floor(total)
        value *= Fraction(p) ** whole
        if total != whole:
            radicals.append((p, total - whole))
    return value, tuple(radicals)


def _base_key(p: JetPolynomial) -> tuple:
    return tuple((monomial_key(m), Fraction(c)) for m, c in p.terms)


def _is_int(e: Fraction) -> bool:
    return e.denominator == 1


def _normalize_factors(coeff: JetPolynomial, factors: Iterable) -> tuple:
    """Fold constants and positive integer powers into ``coeff``; return
    ``(coeff, sorted factor tuple)``."""
    acc: dict = {}
    for base, e in factors:
        e = Fraction(e)
        if not e:
            continue
        if isinstance(base, Rational):
            base = JetPolynomial.const(base)
        if base.is_zero():
            if e > 0:
                return JetPolynomial(), ()
            raise ZeroDivisionError("zero base raised to a negative power")
        c, b = base.primitive_part()
        if b.is_constant():
            c, b = c * Fraction(b.constant_term()), None
        if c != 1:
            value, radicals = constant_power(c, e)
            coeff = coeff * value
            for prime, frac in radicals:
                pb = JetPolynomial.const(prime)
                acc[pb] = acc.get(pb, Fraction(0)) + frac
        if b is not None:
            acc[b] = acc.get(b, Fraction(0)) + e
    out = []
    for b, e in acc.items():
        if not e:
            continue
        if b.is_constant():
            # prime base: fold the integer part, keep 0 < e < 1
            whole = math.floor(e)
            coeff = coeff * Fraction(b.constant_term()) ** whole
            if e != whole:
                out.append((b, e - whole))
            continue
        if _is_int(e) and e > 0:
            coeff = coeff * b ** int(e)
        else:
            out.append((b, e))
    out.sort(key=lambda be: _base_key(be[0]))
    return coeff, tuple(out)


class PowerExpression:
    """Immutable sum of ``coefficient * prod(base**exponent)`` terms."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable = ()):
        acc: dict = {}
        for coeff, factors in terms:
            coeff = JetPolynomial._coerce(coeff)
            if coeff is None:
                raise TypeError("term coefficient must be a polynomial or rational")
            coeff, key = _normalize_factors(coeff, factors)
            if coeff.is_zero():
                continue
            acc[key] = acc[key] + coeff if key in acc else coeff
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def _from_dict(cls, acc: Mapping) -> "PowerExpression":
        e = object.__new__(cls)
        e._terms = {k: c for k, c in acc.items() if c}
        return e

    @classmethod
    def poly(cls, p) -> "PowerExpression":
        return cls([(p, ())])

    @classmethod
    def power(cls, base, exponent, coeff=1) -> "PowerExpression":
        return cls([(coeff, ((base, exponent),))])

    @staticmethod
    def _coerce(other) -> "PowerExpression | None":
        if isinstance(other, PowerExpression):
            return other
        if isinstance(other, (JetPolynomial, Rational)):
            return PowerExpression.poly(other)
        return None

    # -- structure -----------------------------------------------------------

    @property
    def terms(self) -> list:
        """Terms as ``(coefficient, factors)`` in a deterministic order."""
        return [
            (self._terms[k], k)
            for k in sorted(self._terms, key=lambda key: tuple((_base_key(b), e) for b, e in key))
        ]

    def bases(self) -> set:
        return {b for key in self._terms for b, _ in key}

    def variables(self) -> frozenset:
        out = set()
        for key, c in self._terms.items():
            out |= c.variables()
            for b, _ in key:
                out |= b.variables()
        return frozenset(out)

    def __len__(self):
        return len(self._terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc = dict(self._terms)
        for k, c in o._terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return PowerExpression._from_dict(acc)

    __radd__ = __add__

    def __neg__(self):
        return PowerExpression._from_dict({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (Rational, JetPolynomial)):
            if isinstance(other, Rational) and not other:
                return PowerExpression()
            return PowerExpression._from_dict({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, PowerExpression):
            return NotImplemented
        out = []
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                out.append((ca * cb, ka + kb))
        return PowerExpression(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.simplify(), o.simplify()
        return a._terms == b._terms

    __hash__ = None

    def __repr__(self):
        return f"PowerExpression({self.render()!r})"

    def render(self, style: str = "indexed") -> str:
        if not self._terms:
            return "0"
        parts = []
        for c, key in self.terms:
            factors = [f"({render(c, style)})"]
            for b, e in key:
                factors.append(f"({render(b, style)})^({e})")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __str__ = render

    # -- calculus ------------------------------------------------------------

    def diff(self, var: int) -> "PowerExpression":
        out = []
        for key, c in self._terms.items():
            dc = partial_derivative(c, var)
            if dc:
                out.append((dc, key))
            for i, (b, e) in enumerate(key):
                db = partial_derivative(b, var)
                if not db:
                    continue
                lowered = key[:i] + ((b, e - 1),) + key[i + 1 :]
                out.append((c * db * e, lowered))
        return PowerExpression(out)

    def substitute(self, var: int, value: JetPolynomial) -> "PowerExpression":
        out = []
        for key, c in self._terms.items():
            out.append(
                (c.substitute(var, value), tuple((b.substitute(var, value), e) for b, e in key))
            )
        return PowerExpression(out)

    # -- canonical form and zero test -----------------------------------------

    def _classes(self) -> dict:
        classes: dict = {}
        for key, c in self._terms.items():
            sig = tuple((b, e - math.floor(e)) for b, e in key if not _is_int(e))
            classes.setdefault(sig, []).append((key, c))
        return classes

    def simplify(self) -> "PowerExpression":
        """Collapse each exponent class to one term ``residual * prod b**min``
        and cancel common base factors out of the residual."""
        out: dict = {}
        for members in self._classes().values():
            mins: dict = {}
            for key, _ in members:
                for b, e in key:
                    mins[b] = min(mins.get(b, e), e)
            for key, _ in members:
                present = {b for b, _ in key}
                for b in mins:
                    if b not in present and _is_int(mins[b]):
                        mins[b] = min(mins[b], Fraction(0))
            residual = JetPolynomial()
            for key, c in members:
                exps = dict(key)
                term = c
                for b, m in mins.items():
                    shift = exps.get(b, Fraction(0)) - m
                    if shift:
                        term = term * b ** int(shift)
                residual = residual + term
            if residual.is_zero():
                continue
            for b in list(mins):
                m = mins[b]
                if b.is_constant():
                    continue
                while m < 0 or not _is_int(m):
                    try:
                        q = exact_divide(residual, b)
                    except NotDivisible:
                        break
                    residual, m = q, m + 1
                mins[b] = m
            coeff, key = _normalize_factors(residual, mins.items())
            if coeff:
                out[key] = out[key] + coeff if key in out else coeff
        return PowerExpression._from_dict(out)

    def is_zero(self):
        """True, False, or :data:`INDETERMINATE`."""
        s = self.simplify()
        if not s._terms:
            return True
        if len(s._classes()) == 1:
            return False
        return INDETERMINATE

    def constant_value(self):
        """The rational value if this canonicalizes to a constant, else None."""
        s = self.simplify()
        if not s._terms:
            return Fraction(0)
        if len(s._terms) == 1:
            (key, c), = s._terms.items()
            if not key and c.is_constant():
                return Fraction(c.constant_term())
        return None

    def as_polynomial(self) -> "JetPolynomial | None":
        s = self.simplify()
        if not s._terms:
            return JetPolynomial()
        if len(s._terms) == 1 and () in s._terms:
            return s._terms[()]
        return None

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, assignment: Mapping[int, object]):
        exact = all(_is_int(e) for key in self._terms for _, e in key) and not any(
            isinstance(assignment.get(v), float) for v in self.variables()
        )
        total = Fraction(0) if exact else 0.0
        for key, c in self._terms.items():
            if exact:
                term = Fraction(poly_evaluate(c, assignment))
                for b, e in key:
                    term *= Fraction(poly_evaluate(b, assignment)) ** int(e)
            else:
                term = float(poly_evaluate(c, assignment))
                for b, e in key:
                    term *= _real_power(float(poly_evaluate(b, assignment)), e)
            total += term
        return total


def _real_power(x: float, e: Fraction) -> float:
    if x >= 0 or _is_int(e):
        return x ** float(e) if not _is_int(e) else x ** int(e)
    if e.denominator % 2 == 0:
        raise ValueError("even root of a negative number")
    mag = (-x) ** float(e)
    return -mag if e.numerator % 2 else mag


def pe_derivative(e: PowerExpression, var: int) -> PowerExpression:
    return e.diff(var)


def pe_is_zero(e: PowerExpression):
    return e.is_zero()


def total_time_derivative(e: PowerExpression, n: int, max_order: int | None = None) -> PowerExpression:
    """``d/dt`` on the order-``n`` jet: ``sum_{i<=n} x_{i+1} d/dx_i + d/dt``."""
    from .polycore import DEFAULT_MAX_ORDER, JetOrderOverflow

    max_order = max_order or DEFAULT_MAX_ORDER
    if n + 1 > max_order:
        raise JetOrderOverflow(f"d/dt on the order-{n} jet needs x{n + 1} > x{max_order}")
    top = max((jet_index(v) for v in e.variables() if is_jet(v)), default=0)
    if top > n:
        raise ValueError(f"expression involves x{top}, beyond the order-{n} jet")
    out = e.diff(T)
    for i in range(1, n + 1):
        d = e.diff(X(i, max_order))
        if d._terms:
            out = out + d * JetPolynomial.var(X(i + 1, max_order))
    return out
