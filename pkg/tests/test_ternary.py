from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from fractal_billiards import ternary
from fractal_billiards.ternary import Address, RepType

unit_rationals = st.fractions(min_value=0, max_value=1, max_denominator=3000)


@pytest.mark.parametrize("x, addr", [
    (F(1, 4), "(lr)"),
    (F(1, 3), "l(r)"),
    (F(2, 3), "r(l)"),
    (F(1, 2), "(c)"),
    (F(7, 12), "c(rl)"),
    (F(0), "(l)"),
    (F(1), "(r)"),
    (F(1, 9), "ll(r)"),
    # a ternary number outside the Cantor set takes the r-tail form
    (F(4, 9), "cl(r)"),
])
def test_canonical_addresses(x, addr):
    assert ternary.address_of(x) == Address.parse(addr)
    assert ternary.value_of(Address.parse(addr)) == x


@pytest.mark.parametrize("x, kind", [
    (F(7, 12), "[lr,c]"),
    (F(1, 2), "[c,∅]"),
    (F(1, 4), "[lr,∅]"),
    (F(1, 3), "[r,l]"),
    (F(5, 6), "[c,r]"),
])
def test_representation_types(x, kind):
    assert ternary.type_of(x) == RepType.parse(kind)
    assert str(ternary.type_of(x)) == kind


def test_address_normalization():
    assert Address("lrl", "rl") == Address("l", "rl")
    assert Address("", "cc") == Address("", "c")
    assert str(Address("c", "rlrl")) == "c(rl)"


def test_shift_and_prefix():
    a = Address.parse("c(rl)")
    assert a.prefix(5) == "crlrl"
    assert a.shift() == Address.parse("(rl)")
    assert ternary.value_of(a.shift()) == 3 * F(7, 12) - 1


def test_bad_inputs():
    with pytest.raises(ValueError):
        Address.parse("c(rx)")
    with pytest.raises(ValueError):
        ternary.address_of(F(3, 2))
    with pytest.raises(ValueError):
        RepType.parse("[q,l]")


@given(unit_rationals)
def test_round_trip(x):
    assert ternary.value_of(ternary.address_of(x)) == x


@given(unit_rationals)
def test_cantor_membership_matches_interval_removal(x):
    # independent check: remove middle thirds by rescaling
    y, inside, seen = x, True, set()
    while y not in seen:
        seen.add(y)
        if F(1, 3) < y < F(2, 3):
            inside = False
            break
        y = 3 * y if y <= F(1, 3) else 3 * y - 2
    assert ternary.in_cantor(ternary.address_of(x)) == inside


@given(unit_rationals)
def test_shift_is_tripling_mod_one(x):
    a = ternary.address_of(x)
    digit = ternary.CHAR_TO_DIGIT[a.char(0)]
    assert ternary.value_of(a.shift()) == 3 * x - digit


def test_ternary_number_test():
    assert ternary.is_ternary_number(F(5, 27))
    assert not ternary.is_ternary_number(F(1, 6))


def test_first_center_index():
    assert ternary.first_center_index(Address.parse("lr(c)")) == 2
    assert ternary.first_center_index(Address.parse("(lr)")) is None
