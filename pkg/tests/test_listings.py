import pytest

from abelchain.hierarchy import OperatorKind, force, hierarchy_member
from abelchain.listings import (
    ABEL_4_CORRECTED,
    CHAIN_BRACKET_4,
    FORCE_ABEL,
    P_A3,
    compare,
    known_discrepancy,
)
from abelchain.polycore import parse_polynomial


@pytest.mark.parametrize("m", range(0, 5))
def test_riccati_listing(m):
    assert compare("riccati", m).matches


@pytest.mark.parametrize("m", range(0, 4))
def test_abel_listing(m):
    assert compare("abel", m).matches


def test_abel_fourth_order_typo():
    cmp = compare("abel", 4)
    assert not cmp.matches
    assert cmp.difference == known_discrepancy()
    assert parse_polynomial(ABEL_4_CORRECTED) == cmp.generated


def test_printed_forces_and_chain_bracket():
    for n, text in FORCE_ABEL.items():
        assert parse_polynomial(text) == force("abel", n)
    assert parse_polynomial(P_A3) == hierarchy_member("abel", 3).expression
    # Gamma4(P_A3) + k x^2 P_A3 = F_A4 + bracket must vanish
    assert (parse_polynomial(FORCE_ABEL[4]) + parse_polynomial(CHAIN_BRACKET_4)).is_zero()


def test_missing_listing():
    with pytest.raises(KeyError):
        compare(OperatorKind.ABEL, 5)
