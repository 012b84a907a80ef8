"""Exact sparse multivariate polynomials over the jet variables t, k, x1, x2, ...

Coefficients are exact rationals (``int`` when integral, ``Fraction`` otherwise).
Monomials are stored sparsely as tuples of ``(var, exponent)`` pairs sorted by
variable index, and every polynomial is kept in canonical form: no zero
coefficients and terms sorted in ascending graded-lexicographic order.
Two polynomials are equal exactly when their term tuples are equal.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from functools import lru_cache, reduce
from numbers import Rational
from typing import Iterable, Mapping, Union

DEFAULT_MAX_ORDER = 16

# variable indices: T and K are fixed, X(i) lives at index i + 1
T = 0
K = 1

Coefficient = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[int, int], ...]


class PolynomialError(ArithmeticError):
    pass


class NotDivisible(PolynomialError):
    pass


class DivisionByZeroPolynomial(PolynomialError, ZeroDivisionError):
    pass


class MissingVariable(PolynomialError, KeyError):
    pass


class JetOrderOverflow(PolynomialError, ValueError):
    pass


def X(i: int, max_order: int = DEFAULT_MAX_ORDER) -> int:
    """Variable id of the jet coordinate x_i (x1 = x, x2 = dx/dt, ...)."""
    if not 1 <= i <= max_order:
        raise JetOrderOverflow(f"jet coordinate x{i} outside 1..{max_order}")
    return i + 1


def jet_index(var: int) -> int:
    """Inverse of :func:`X`; 0 for T and K."""
    return var - 1 if var > K else 0


def is_jet(var: int) -> bool:
    return var > K


def var_name(var: int, style: str = "indexed") -> str:
    if var == T:
        return "t"
    if var == K:
        return "k"
    i = jet_index(var)
    if style == "named" and i <= 4:
        return "xvaw"[i - 1]
    if style == "latex":
        return f"x_{{{i}}}"
    return f"x{i}"


def _norm(c) -> Coefficient:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


def _canonical_monomial(pairs: Iterable) -> Monomial:
    d: dict = {}
    for v, e in pairs:
        if e < 0:
            raise ValueError("negative exponent in polynomial monomial")
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


@lru_cache(maxsize=None)
def monomial_key(mono: Monomial) -> tuple:
    # a smaller variable index with positive exponent dominates later ones
    return (sum(e for _, e in mono), tuple((-v, e) for v, e in mono))


@lru_cache(maxsize=1 << 16)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Monomial, b: Monomial):
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def _mono_degree_in(mono: Monomial, var: int) -> int:
    for v, e in mono:
        if v == var:
            return e
    return 0


class JetPolynomial:
    """Immutable polynomial in canonical form.

    Construct from a mapping ``{monomial: coefficient}`` or use the helpers
    :meth:`var`, :meth:`const` and :func:`parse_polynomial`.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coefficient] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for mono, c in items:
            mono = _canonical_monomial(mono)
            acc[mono] = acc.get(mono, 0) + _norm(c)
        self._terms = tuple(
            sorted(((m, c) for m, c in acc.items() if c), key=lambda mc: monomial_key(mc[0]))
        )
        self._hash = None

    @classmethod
    def _raw(cls, acc: dict) -> "JetPolynomial":
        p = object.__new__(cls)
        p._terms = tuple(
            sorted(((m, _norm(c)) for m, c in acc.items() if c), key=lambda mc: monomial_key(mc[0]))
        )
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "JetPolynomial":
        return cls._raw({(): c})

    @classmethod
    def var(cls, v: int, power: int = 1) -> "JetPolynomial":
        return cls._raw({((v, power),) if power else (): 1})

    # -- structure -------------------------------------------------------

    @property
    def terms(self) -> tuple:
        return self._terms

    def __iter__(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == ())

    def constant_term(self) -> Coefficient:
        for m, c in self._terms:
            if m == ():
                return c
        return 0

    def coefficient(self, mono: Iterable) -> Coefficient:
        mono = _canonical_monomial(mono)
        for m, c in self._terms:
            if m == mono:
                return c
        return 0

    def leading_term(self) -> tuple:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self._terms[-1]

    def variables(self) -> frozenset:
        return frozenset(v for m, _ in self._terms for v, _ in m)

    def max_jet_index(self) -> int:
        return max((jet_index(v) for v in self.variables() if is_jet(v)), default=0)

    def degree(self, var: int | None = None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m, _ in self._terms)
        return max(_mono_degree_in(m, var) for m, _ in self._terms)

    def as_dict(self) -> dict:
        return dict(self._terms)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "JetPolynomial | None":
        if isinstance(other, JetPolynomial):
            return other
        if isinstance(other, Rational):
            return JetPolynomial.const(other)
        return None

    def __add__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        acc = dict(self._terms)
        for m, c in q._terms:
            acc[m] = acc.get(m, 0) + c
        return JetPolynomial._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        p = object.__new__(JetPolynomial)
        p._terms = tuple((m, -c) for m, c in self._terms)
        p._hash = None
        return p

    def __sub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return JetPolynomial()
            c0 = _norm(other)
            p = object.__new__(JetPolynomial)
            p._terms = tuple((m, _norm(c * c0)) for m, c in self._terms)
            p._hash = None
            return p
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        acc: dict = {}
        for ma, ca in self._terms:
            for mb, cb in other._terms:
                m = _mono_mul(ma, mb)
                acc[m] = acc.get(m, 0) + ca * cb
        return JetPolynomial._raw(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return self * (1 / Fraction(other))
        if isinstance(other, JetPolynomial):
            return exact_divide(self, other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = JetPolynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self._terms == q._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self):
        return f"JetPolynomial({render(self)!r})"

    def __str__(self):
        return render(self)

    # -- calculus and evaluation ----------------------------------------

    def diff(self, var: int) -> "JetPolynomial":
        return partial_derivative(self, var)

    def evaluate(self, assignment: Mapping[int, object]):
        return evaluate(self, assignment)

    def substitute(self, var: int, value: "JetPolynomial") -> "JetPolynomial":
        """Replace every occurrence of ``var`` by the polynomial ``value``."""
        value = self._coerce(value)
        by_power: dict = {}
        for m, c in self._terms:
            e = _mono_degree_in(m, var)
            rest = tuple((v, x) for v, x in m if v != var)
            by_power.setdefault(e, {})
            by_power[e][rest] = by_power[e].get(rest, 0) + c
        if set(by_power) <= {0}:
            return self
        out = JetPolynomial()
        power = JetPolynomial.const(1)
        for e in range(max(by_power) + 1):
            if e in by_power:
                out = out + JetPolynomial._raw(by_power[e]) * power
            power = power * value
        return out

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self._terms:
            return Fraction(0)
        nums = [Fraction(c).numerator for _, c in self._terms]
        dens = [Fraction(c).denominator for _, c in self._terms]
        g = reduce(math.gcd, nums)
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), dens)
        return Fraction(abs(g), lcm)

    def primitive_part(self) -> tuple:
        """Split into ``(c, p)`` with ``self == c * p``, ``p`` of content 1 and
        positive leading coefficient."""
        if not self._terms:
            raise ValueError("zero polynomial has no primitive part")
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return _norm(c), self * (1 / c)


def partial_derivative(p: JetPolynomial, var: int) -> JetPolynomial:
    acc: dict = {}
    for m, c in p._terms:
        e = _mono_degree_in(m, var)
        if not e:
            continue
        nm = tuple((v, x - 1) if v == var else (v, x) for v, x in m if not (v == var and x == 1))
        acc[nm] = acc.get(nm, 0) + c * e
    return JetPolynomial._raw(acc)


def exact_divide(p: JetPolynomial, d: JetPolynomial) -> JetPolynomial:
    """Return ``q`` with ``p == q * d``; raise :class:`NotDivisible` otherwise."""
    if d.is_zero():
        raise DivisionByZeroPolynomial("division by the zero polynomial")
    lm, lc = d.leading_term()
    rem = dict(p._terms)
    quot: dict = {}
    while rem:
        m = max(rem, key=monomial_key)
        qm = _mono_div(m, lm)
        if qm is None:
            raise NotDivisible(f"{render(p)} is not divisible by {render(d)}")
        qc = _norm(Fraction(rem[m]) / lc)
        quot[qm] = qc
        for dm, dc in d._terms:
            mm = _mono_mul(qm, dm)
            c = rem.get(mm, 0) - qc * dc
            if c:
                rem[mm] = c
            else:
                rem.pop(mm, None)
    return JetPolynomial._raw(quot)


def divides(d: JetPolynomial, p: JetPolynomial) -> bool:
    try:
        exact_divide(p, d)
    except NotDivisible:
        return False
    return True


def evaluate(p: JetPolynomial, assignment: Mapping[int, object]):
    """Evaluate exactly for rational assignments and in IEEE doubles when any
    assigned value is a float."""
    missing = p.variables() - set(assignment)
    if missing:
        names = ", ".join(var_name(v) for v in sorted(missing))
        raise MissingVariable(f"no value for {names}")
    use_float = any(isinstance(assignment[v], float) for v in p.variables())
    if use_float:
        vals = {v: float(assignment[v]) for v in p.variables()}
        total = 0.0
        for m, c in p._terms:
            term = float(c)
            for v, e in m:
                term *= vals[v] ** e
            total += term
        return total
    total = Fraction(0)
    for m, c in p._terms:
        term = Fraction(c)
        for v, e in m:
            term *= Fraction(assignment[v]) ** e
        total += term
    return _norm(total)


# -- convenience constructors ---------------------------------------------

ZERO = JetPolynomial()
ONE = JetPolynomial.const(1)


def t_var() -> JetPolynomial:
    return JetPolynomial.var(T)


def k_var() -> JetPolynomial:
    return JetPolynomial.var(K)


def x_var(i: int, max_order: int = DEFAULT_MAX_ORDER) -> JetPolynomial:
    return JetPolynomial.var(X(i, max_order))


# -- rendering ---------------------------------------------------------------


def _fmt_coeff(c: Coefficient, style: str) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    if style == "latex":
        return f"\\frac{{{c.numerator}}}{{{c.denominator}}}"
    return f"{c.numerator}/{c.denominator}"


def _fmt_mono(mono: Monomial, style: str) -> list:
    out = []
    for v, e in mono:
        name = var_name(v, style)
        if e == 1:
            out.append(name)
        elif style == "latex":
            out.append(f"{name}^{{{e}}}")
        else:
            out.append(f"{name}^{e}")
    return out


def render(p: JetPolynomial, style: str = "indexed") -> str:
    """Deterministic text rendering.

    ``style`` is ``"indexed"`` (x1, x2, ...), ``"named"`` (x, v, a, w for the
    first four jet coordinates) or ``"latex"``. Terms appear in ascending
    canonical order, so the highest derivative comes first for hierarchy
    members.
    """
    if not p._terms:
        return "0"
    joiner = " " if style == "latex" else "*"
    pieces = []
    for i, (m, c) in enumerate(p._terms):
        neg = c < 0
        mag = -c if neg else c
        factors = _fmt_mono(m, style)
        if mag != 1 or not factors:
            factors.insert(0, _fmt_coeff(mag, style))
        body = joiner.join(factors)
        if i == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


# -- parsing -------------------------------------------------------------------

_NAMED_VARS = {"x": 1, "v": 2, "a": 3, "w": 4}


def _name_to_var(name: str, max_order: int) -> int:
    if name == "t":
        return T
    if name == "k":
        return K
    if name in _NAMED_VARS:
        return X(_NAMED_VARS[name], max_order)
    if name.startswith("x") and name[1:].isdigit():
        return X(int(name[1:]), max_order)
    raise ValueError(f"unknown variable {name!r}")


def parse_polynomial(text: str, max_order: int = DEFAULT_MAX_ORDER) -> JetPolynomial:
    """Parse expressions like ``"x3 + 4*k*x1^2*x2 + k^2*x1^5"``.

    Accepts indexed names (x1, x2, ...), the short names x, v, a, w, and
    t, k; operators ``+ - * / ^ **`` and parentheses. Division is only by
    rational constants.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return JetPolynomial.const(node.value)
        if isinstance(node, ast.Name):
            return JetPolynomial.var(_name_to_var(node.id, max_order))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise ValueError("division only by nonzero constants")
                return left * (1 / Fraction(right.constant_term()))
            if isinstance(node.op, ast.Pow):
                if not right.is_constant():
                    raise ValueError("exponent must be an integer constant")
                e = Fraction(right.constant_term())
                if e.denominator != 1 or e < 0:
                    raise ValueError("exponent must be a nonnegative integer")
                return left ** int(e)
        raise ValueError(f"cannot parse {ast.dump(node)}")

    return walk(tree)
