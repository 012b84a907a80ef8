"""Published expansions of the hierarchy members, transcribed as text.

Dots are written as jet names: x = x1, v = x2, a = x3, w = x4, x5 for the
fourth derivative. Everything is parsed with :func:`parse_polynomial`, so
comparisons against the generator are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hierarchy import OperatorKind, hierarchy_member
from .polycore import JetPolynomial, parse_polynomial, render

RICCATI = {
    0: "x",
    1: "v + k*x^2",
    2: "a + 3*k*x*v + k^2*x^3",
    3: "w + 4*k*x*a + 6*k^2*x^2*v + 3*k*v^2 + k^3*x^4",
    4: "x5 + 5*k*x*w + 10*k*v*a + 15*k^2*x*v^2 + 10*k^2*x^2*a + 10*k^3*x^3*v + k^4*x^5",
}

ABEL = {
    0: "x",
    1: "v + k*x^3",
    2: "a + 4*k*x^2*v + k^2*x^5",
    3: "w + 5*k*x^2*a + 8*k*x*v^2 + 9*k^2*x^4*v + k^3*x^7",
    # printed with "7 x xdot" inside the k^2 bracket
    4: "x5 + 2*k*(4*v^3 + 13*x*v*a + 3*x^2*w) + 2*k^2*x^3*(22*v^2 + 7*x*v)"
    " + 16*k^3*x^6*v + k^4*x^9",
}

# the same line with the bracket term read as 7 x a
ABEL_4_CORRECTED = (
    "x5 + 2*k*(4*v^3 + 13*x*v*a + 3*x^2*w) + 2*k^2*x^3*(22*v^2 + 7*x*a)"
    " + 16*k^3*x^6*v + k^4*x^9"
)

# forces as printed with the phase-space vector fields
FORCE_ABEL = {
    2: "-4*k*x^2*v - k^2*x^5",
    3: "-5*k*x^2*a - 8*k*x*v^2 - 9*k^2*x^4*v - k^3*x^7",
    4: "-2*k*(4*v^3 + 13*x*v*a + 3*x^2*w) - 2*k^2*x^3*(22*v^2 + 7*x*a)"
    " - 16*k^3*x^6*v - k^4*x^9",
}

P_A3 = "w + 5*k*x^2*a + 8*k*x*v^2 + 9*k^2*x^4*v + k^3*x^7"

# right-hand side of Gamma4(P_A3) + k x^2 P_A3 before it is recognised as 0:
# F_A4 plus this bracket
CHAIN_BRACKET_4 = (
    "k*(8*v^3 + 26*x*v*a + 6*x^2*w) + k^2*(44*x^3*v^2 + 14*x^4*a)"
    " + 16*k^3*x^6*v + k^4*x^9"
)


@dataclass(frozen=True)
class ListingComparison:
    kind: OperatorKind
    order: int
    published: JetPolynomial
    generated: JetPolynomial

    @property
    def difference(self) -> JetPolynomial:
        """``generated - published``."""
        return self.generated - self.published

    @property
    def matches(self) -> bool:
        return self.difference.is_zero()

    def to_json(self) -> dict:
        return {
            "family": self.kind.value,
            "order": self.order,
            "matches": self.matches,
            "difference": render(self.difference),
        }


def published(kind: "OperatorKind | str", m: int) -> JetPolynomial:
    kind = OperatorKind.parse(kind)
    table = ABEL if kind is OperatorKind.ABEL else RICCATI
    if m not in table:
        raise KeyError(f"no published listing for {kind.value} order {m}")
    return parse_polynomial(table[m])


def compare(kind: "OperatorKind | str", m: int) -> ListingComparison:
    kind = OperatorKind.parse(kind)
    return ListingComparison(kind, m, published(kind, m), hierarchy_member(kind, m).expression)


def known_discrepancy() -> JetPolynomial:
    """The one term by which the printed order-4 Abel line differs:
    ``14 k^2 x^4 (a - v)``."""
    return parse_polynomial("14*k^2*x^4*(a - v)")
