from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Union

from pydantic import BeforeValidator, PlainSerializer
from typing_extensions import Annotated

from .utils import FieldKind, FieldMismatchError, ParseError


class Zeta6:
    """
    Element a + b*z of Q(z), z = exp(i*pi/3), reduced with z^2 = z - 1.
    Integers mix freely with Zeta6 values; Fractions must be promoted first.
    """
    __slots__ = ("_a", "_b")

    def __init__(self, a: Union[int, Fraction] = 0, b: Union[int, Fraction] = 0) -> None:
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @classmethod
    def zeta(cls) -> Zeta6:
        return cls(0, 1)

    @classmethod
    def from_rational(cls, x: Union[int, Fraction]) -> Zeta6:
        return cls(x, 0)

    def __repr__(self) -> str:
        return f"Zeta6({self._a}, {self._b})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        return f"{self._a}{'+' if self._b >= 0 else '-'}{abs(self._b)}z"

    def _coerce(self, other: Any) -> Zeta6:
        if isinstance(other, Zeta6):
            return other
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return Zeta6(other, 0)
        if isinstance(other, Fraction):
            raise FieldMismatchError(f"cannot combine rational {other} with {self!r}; promote it first")
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Zeta6):
            return self._a == other._a and self._b == other._b
        if isinstance(other, int) and not isinstance(other, bool):
            return self._b == 0 and self._a == other
        return False

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b))

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __neg__(self) -> Zeta6:
        return Zeta6(-self._a, -self._b)

    def __add__(self, other: Any) -> Zeta6:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Zeta6(self._a + other._a, self._b + other._b)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Zeta6:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Zeta6(self._a - other._a, self._b - other._b)

    def __rsub__(self, other: Any) -> Zeta6:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> Zeta6:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self._a, self._b, other._a, other._b
        # (a + bz)(c + dz) = ac + (ad + bc)z + bd(z - 1)
        return Zeta6(a * c - b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def conjugate(self) -> Zeta6:
        # conj(z) = 1 - z
        return Zeta6(self._a + self._b, -self._b)

    def norm(self) -> Fraction:
        return self._a * self._a + self._a * self._b + self._b * self._b

    def inverse(self) -> Zeta6:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Zeta6 division by zero")
        conj = self.conjugate()
        return Zeta6(conj.a / n, conj.b / n)

    def __truediv__(self, other: Any) -> Zeta6:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> Zeta6:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> Zeta6:
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = Zeta6(1, 0)
        k = abs(exponent)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


Scalar = Union[Fraction, Zeta6]


def field_of(x: Any) -> FieldKind:
    if isinstance(x, Zeta6):
        return FieldKind.ZETA6
    return FieldKind.RATIONAL


def common_field(values: Iterable[Any]) -> FieldKind:
    """Return the field shared by all values; ints are neutral and default to rational."""
    kinds = {field_of(v) for v in values if not isinstance(v, int)}
    if len(kinds) > 1:
        raise FieldMismatchError("mixed rational and zeta6 scalars")
    return kinds.pop() if kinds else FieldKind.RATIONAL


def promote(x: Union[int, Fraction, Zeta6]) -> Zeta6:
    if isinstance(x, Zeta6):
        return x
    return Zeta6.from_rational(x)


def coerce_to_field(x: Union[int, Fraction, Zeta6], field: FieldKind) -> Scalar:
    if field == FieldKind.ZETA6:
        return promote(x)
    if isinstance(x, Zeta6):
        raise FieldMismatchError(f"{x!r} is not rational")
    return Fraction(x)


def zero_of(field: FieldKind) -> Scalar:
    return Zeta6() if field == FieldKind.ZETA6 else Fraction(0)


def one_of(field: FieldKind) -> Scalar:
    return Zeta6(1) if field == FieldKind.ZETA6 else Fraction(1)


def parse_rational(obj: Any) -> Fraction:
    if isinstance(obj, Fraction):
        return obj
    if isinstance(obj, bool):
        raise ParseError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"not a rational: {obj!r}") from e
    raise ParseError(f"not a rational: {obj!r}")


def parse_scalar(obj: Any) -> Scalar:
    """Decode "num/den", an int, or {"a": ..., "b": ...} into a Scalar."""
    if isinstance(obj, Zeta6):
        return obj
    if isinstance(obj, dict):
        if set(obj) != {"a", "b"}:
            raise ParseError(f"zeta6 scalar needs exactly keys 'a' and 'b': {obj!r}")
        return Zeta6(parse_rational(obj["a"]), parse_rational(obj["b"]))
    return parse_rational(obj)


def encode_rational(x: Union[int, Fraction]) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def encode_scalar(x: Union[int, Scalar]) -> Union[str, dict]:
    if isinstance(x, Zeta6):
        return {"a": encode_rational(x.a), "b": encode_rational(x.b)}
    return encode_rational(x)


ScalarField = Annotated[
    Any,
    BeforeValidator(parse_scalar),
    PlainSerializer(encode_scalar),
]
