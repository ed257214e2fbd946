"""
Homogeneous polynomials, Waring points and the polynomial <-> symmetric tensor
dictionary. A monomial x^alpha of degree d corresponds to the symmetric tensor
whose coefficient at every word with exponent vector alpha is alpha!/d!;
tensor_coeff is the single place this normalization is applied.
"""
from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial, prod
from typing import Any, Dict, Iterator, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator
from typing_extensions import Self

from .linalg import exact_rank
from .scalar import Scalar, ScalarField, Zeta6, common_field, encode_scalar, parse_scalar
from .utils import FieldKind, PreconditionError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


def mul_rational(x, q: Fraction):
    """Multiply a scalar of either field by a rational constant."""
    if isinstance(x, Zeta6):
        return Zeta6(x.a * q, x.b * q)
    return x * q


def alpha_factorial(alpha: Sequence[int]) -> int:
    return prod(factorial(a) for a in alpha)


def compositions(d: int, m: int) -> Iterator[Exponent]:
    """Exponent vectors of length m summing to d, in descending lexicographic order."""
    if m == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in compositions(d - first, m - 1):
            yield (first,) + rest


def monomial_basis(d: int, m: int) -> List[Exponent]:
    return list(compositions(d, m))


def exponent_of(word: Sequence[int], m: int) -> Exponent:
    """Exponent vector of a 1-based index word."""
    counts = Counter(word)
    if any(i < 1 or i > m for i in counts):
        raise PreconditionError(f"word {tuple(word)} has entries outside 1..{m}")
    return tuple(counts.get(j + 1, 0) for j in range(m))


def multisets(k: int, m: int) -> List[Tuple[int, ...]]:
    """Size-k multisets over 1..m as sorted words."""
    return list(combinations_with_replacement(range(1, m + 1), k))


class LinearForm(BaseModel):
    """Coefficient vector of a homogeneous linear form; on the wire a bare list."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: Tuple[ScalarField, ...]

    @model_validator(mode="before")
    @classmethod
    def accept_bare_list(cls, values: Any) -> Any:
        if isinstance(values, (list, tuple)):
            return {"coefficients": tuple(values)}
        return values

    @model_validator(mode="after")
    def validate_coefficients(self) -> Self:
        if not self.coefficients:
            raise ValueError("a linear form needs at least one coefficient")
        common_field(self.coefficients)
        return self

    @model_serializer
    def serialize(self) -> List[Any]:
        return [encode_scalar(c) for c in self.coefficients]

    @property
    def m(self) -> int:
        return len(self.coefficients)

    @property
    def field(self) -> FieldKind:
        return common_field(self.coefficients)

    def __getitem__(self, j: int):
        return self.coefficients[j]

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def scaled(self, c) -> LinearForm:
        return LinearForm(coefficients=tuple(c * x for x in self.coefficients))


class DensePoly(BaseModel):
    """Homogeneous polynomial of degree d in m variables, keyed by exponent vectors."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(ge=0)
    m: int = Field(ge=1)
    terms: Dict[Exponent, Any] = {}

    @model_validator(mode="before")
    @classmethod
    def parse_terms(cls, values: Any) -> Any:
        if isinstance(values, dict) and isinstance(values.get("terms"), list):
            terms: Dict[Exponent, Any] = {}
            for term in values["terms"]:
                alpha = tuple(term["alpha"])
                terms[alpha] = terms.get(alpha, 0) + parse_scalar(term["c"])
            values = {**values, "terms": terms}
        if isinstance(values, dict) and isinstance(values.get("terms"), dict):
            values = {**values, "terms": {tuple(k): v for k, v in values["terms"].items() if v}}
        return values

    @model_validator(mode="after")
    def validate_terms(self) -> Self:
        for alpha, c in self.terms.items():
            if len(alpha) != self.m or sum(alpha) != self.d or min(alpha) < 0:
                raise ValueError(f"exponent {alpha} does not fit degree {self.d} in {self.m} variables")
        common_field(self.terms.values())
        return self

    @model_serializer
    def serialize(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "m": self.m,
            "terms": [
                {"alpha": list(alpha), "c": encode_scalar(self.terms[alpha])}
                for alpha in sorted(self.terms, reverse=True)
            ],
        }

    @classmethod
    def from_terms(cls, d: int, m: int, terms: Dict[Exponent, Any]) -> DensePoly:
        """Trusted constructor for internally computed coefficient maps."""
        return cls.model_construct(d=d, m=m, terms={a: c for a, c in terms.items() if c})

    @classmethod
    def zero(cls, d: int, m: int) -> DensePoly:
        return cls.from_terms(d, m, {})

    @property
    def field(self) -> FieldKind:
        return common_field(self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, alpha: Sequence[int]):
        return self.terms.get(tuple(alpha), 0)

    def _check_compatible(self, other: DensePoly) -> None:
        if (self.d, self.m) != (other.d, other.m):
            raise PreconditionError(
                f"polynomials of shape (d={self.d}, m={self.m}) and (d={other.d}, m={other.m}) do not add"
            )

    def __add__(self, other: DensePoly) -> DensePoly:
        self._check_compatible(other)
        terms = dict(self.terms)
        for alpha, c in other.terms.items():
            terms[alpha] = terms.get(alpha, 0) + c
        return DensePoly.from_terms(self.d, self.m, terms)

    def __neg__(self) -> DensePoly:
        return DensePoly.from_terms(self.d, self.m, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: DensePoly) -> DensePoly:
        return self + (-other)

    def scaled(self, c) -> DensePoly:
        return DensePoly.from_terms(self.d, self.m, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other: DensePoly) -> DensePoly:
        if self.m != other.m:
            raise PreconditionError("cannot multiply polynomials in different variable counts")
        terms: Dict[Exponent, Any] = {}
        for a, c in self.terms.items():
            for b, e in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                terms[key] = terms.get(key, 0) + c * e
        return DensePoly.from_terms(self.d + other.d, self.m, terms)

    def substitute(self, g: Sequence[Sequence]) -> DensePoly:
        """Linear substitution x_k -> sum_j g[j][k] x_j."""
        m = self.m
        images = [
            DensePoly.from_terms(1, m, {tuple(int(i == j) for i in range(m)): g[j][k] for j in range(m)})
            for k in range(m)
        ]
        result = DensePoly.zero(self.d, m)
        one = DensePoly.from_terms(0, m, {(0,) * m: 1})
        for alpha, c in self.terms.items():
            term = one
            for k, power in enumerate(alpha):
                for _ in range(power):
                    term = term * images[k]
            result = result + term.scaled(c)
        return result


def multiply_by_form(terms: Dict[Exponent, Any], form: LinearForm) -> Dict[Exponent, Any]:
    """Product of a coefficient map with a linear form."""
    out: Dict[Exponent, Any] = {}
    for j, a in enumerate(form.coefficients):
        if not a:
            continue
        for alpha, c in terms.items():
            key = alpha[:j] + (alpha[j] + 1,) + alpha[j + 1:]
            out[key] = out.get(key, 0) + a * c
    return out


class WaringTerm(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    c: ScalarField = 1
    form: LinearForm


class WaringPoint(BaseModel):
    """p = sum_i c_i * l_i^d, possibly with no terms (the zero tensor)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(ge=1)
    m: int = Field(ge=1)
    terms: List[WaringTerm] = []

    @model_validator(mode="after")
    def validate_terms(self) -> Self:
        for term in self.terms:
            if term.form.m != self.m:
                raise ValueError(f"form of length {term.form.m} in a point with m={self.m}")
        self.field
        return self

    @classmethod
    def from_forms(cls, d: int, forms: Sequence[Sequence], coefficients: Sequence = ()) -> WaringPoint:
        m = len(forms[0]) if forms else 1
        linear = [LinearForm(coefficients=tuple(f)) for f in forms]
        if not coefficients:
            # the default coefficient stays an int so it fits either field
            return cls(d=d, m=m, terms=[WaringTerm(form=f) for f in linear])
        return cls(d=d, m=m, terms=[WaringTerm(c=c, form=f) for c, f in zip(coefficients, linear)])

    @property
    def rank(self) -> int:
        return len(self.terms)

    @property
    def field(self) -> FieldKind:
        values: List[Any] = []
        for term in self.terms:
            values.append(term.c)
            values.extend(term.form.coefficients)
        return common_field(values)

    def scaled(self, c) -> WaringPoint:
        return WaringPoint(d=self.d, m=self.m, terms=[WaringTerm(c=c * t.c, form=t.form) for t in self.terms])


def waring_expand(p: WaringPoint) -> DensePoly:
    """Expand sum_i c_i l_i^d by the multinomial theorem."""
    p.field
    d_fact = factorial(p.d)
    terms: Dict[Exponent, Any] = {}
    for term in p.terms:
        coords = term.form.coefficients
        for alpha in compositions(p.d, p.m):
            if any(power and not coords[j] for j, power in enumerate(alpha)):
                continue
            value = term.c
            for j, power in enumerate(alpha):
                if power:
                    value = value * coords[j] ** power
            value = value * (d_fact // alpha_factorial(alpha))
            terms[alpha] = terms.get(alpha, 0) + value
    return DensePoly.from_terms(p.d, p.m, terms)


def tensor_coeff(p: DensePoly, word: Sequence[int]):
    """Coefficient of e_word in the symmetric tensor of p: c_alpha * alpha!/d!."""
    if len(word) != p.d:
        raise PreconditionError(f"word of length {len(word)} for a degree {p.d} polynomial")
    alpha = exponent_of(word, p.m)
    c = p.terms.get(alpha, 0)
    if not c:
        return Fraction(0) if p.field == FieldKind.RATIONAL else Zeta6()
    return mul_rational(c, Fraction(alpha_factorial(alpha), factorial(p.d)))


def contract(word: Sequence[int], p: DensePoly) -> DensePoly:
    """The contraction <e_word, p> as a degree d-k polynomial."""
    k = len(word)
    if k > p.d:
        raise PreconditionError(f"cannot contract a degree {p.d} polynomial by a word of length {k}")
    w = exponent_of(word, p.m)
    scale_num = factorial(p.d - k)
    terms: Dict[Exponent, Any] = {}
    for alpha, c in p.terms.items():
        beta = tuple(a - b for a, b in zip(alpha, w))
        if min(beta) < 0:
            continue
        q = Fraction(alpha_factorial(alpha) * scale_num, factorial(p.d) * alpha_factorial(beta))
        terms[beta] = mul_rational(c, q)
    return DensePoly.from_terms(p.d - k, p.m, terms)


class Flattening(BaseModel):
    """Multiset-indexed flattening matrix; rows are size-k multisets, columns size-(d-k)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int
    rows: List[Tuple[int, ...]]
    columns: List[Tuple[int, ...]]
    entries: List[List[Any]]

    def rank(self) -> int:
        return exact_rank(self.entries)


def flattening(p: DensePoly, k: int) -> Flattening:
    if not 0 <= k <= p.d:
        raise PreconditionError(f"flattening index {k} outside 0..{p.d}")
    rows = multisets(k, p.m)
    columns = multisets(p.d - k, p.m)
    entries = [[tensor_coeff(p, row + col) for col in columns] for row in rows]
    logger.debug("flattening k=%d: %d x %d", k, len(rows), len(columns))
    return Flattening(k=k, rows=rows, columns=columns, entries=entries)
