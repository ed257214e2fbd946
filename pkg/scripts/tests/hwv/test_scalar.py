import pytest
import sys
from fractions import Fraction

from hypothesis import given, strategies as st

from scripts.hwv.scalar import (
    Zeta6,
    coerce_to_field,
    common_field,
    encode_scalar,
    parse_scalar,
    promote,
)
from scripts.hwv.utils import FieldKind, FieldMismatchError, ParseError

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=20)
zeta6s = st.builds(Zeta6, rationals, rationals)

ZETA = Zeta6.zeta()


def test_zeta_is_a_primitive_sixth_root():
    assert ZETA ** 6 == 1
    assert ZETA ** 3 == -1
    assert ZETA - 1 == ZETA ** 2
    assert all(ZETA ** k != 1 for k in range(1, 6))


def test_zeta_inverse_is_conjugate():
    assert ZETA.inverse() == ZETA.conjugate()
    assert ZETA * ZETA.conjugate() == 1
    assert ZETA.norm() == 1


@given(zeta6s, zeta6s, zeta6s)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Zeta6(1, 1) / Zeta6()


def test_ints_are_field_neutral():
    assert Zeta6(2, 1) + 3 == Zeta6(5, 1)
    assert 2 * Zeta6(1, 1) == Zeta6(2, 2)
    assert 1 - ZETA == ZETA.conjugate()


def test_fraction_operand_needs_promotion():
    with pytest.raises(FieldMismatchError):
        ZETA + Fraction(1, 2)
    assert ZETA + promote(Fraction(1, 2)) == Zeta6(Fraction(1, 2), 1)


def test_common_field():
    assert common_field([1, Fraction(1, 2)]) == FieldKind.RATIONAL
    assert common_field([1, ZETA]) == FieldKind.ZETA6
    assert common_field([]) == FieldKind.RATIONAL
    with pytest.raises(FieldMismatchError):
        common_field([Fraction(1), ZETA])


def test_coerce_to_field():
    assert coerce_to_field(3, FieldKind.ZETA6) == Zeta6(3)
    with pytest.raises(FieldMismatchError):
        coerce_to_field(ZETA, FieldKind.RATIONAL)


@pytest.mark.parametrize(
    ("wire", "value"),
    [
        ("3", Fraction(3)),
        ("-7/4", Fraction(-7, 4)),
        (5, Fraction(5)),
        ({"a": "1/2", "b": "-1"}, Zeta6(Fraction(1, 2), -1)),
    ],
)
def test_parse_scalar(wire, value):
    assert parse_scalar(wire) == value


@pytest.mark.parametrize(
    ("value", "wire"),
    [
        (Fraction(3), "3"),
        (Fraction(-7, 4), "-7/4"),
        (Zeta6(6, 0), {"a": "6", "b": "0"}),
    ],
)
def test_encode_scalar(value, wire):
    assert encode_scalar(value) == wire


@pytest.mark.parametrize("wire", ["x", "1/0", True, 1.5, {"a": "1"}, None])
def test_parse_scalar_rejects(wire):
    with pytest.raises(ParseError):
        parse_scalar(wire)


if __name__ == "__main__":
    sys.exit(pytest.main(["-v", __file__]))
