"""
Noncommutative algebraic branching programs over a layered vertex set.
Vertex indices are 1-based per layer; layer 0 holds the source, layer d the sink.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator
from typing_extensions import Self

from .linalg import row_echelon
from .polynomial import (
    DensePoly,
    LinearForm,
    WaringPoint,
    exponent_of,
    alpha_factorial,
    flattening,
    multiply_by_form,
    mul_rational,
    tensor_coeff,
)
from .scalar import common_field, zero_of
from .utils import FieldKind, PreconditionError

logger = logging.getLogger(__name__)

SOURCE = 1
SINK = 1


class AbpEdge(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True, arbitrary_types_allowed=True)

    source: int = Field(alias="from", ge=1)
    target: int = Field(alias="to", ge=1)
    label: LinearForm


class NcAbp(BaseModel):
    """
    Layered ncABP. edges[k] holds the edges from layer k to layer k+1; an absent
    edge reads as the zero label.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(ge=1)
    m: int = Field(ge=1)
    layers: List[int]
    edges: List[List[AbpEdge]]

    _out: Optional[List[Dict[int, List[Tuple[int, LinearForm]]]]] = PrivateAttr(default=None)
    _labels: Optional[List[Dict[Tuple[int, int], LinearForm]]] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def validate_layers(self) -> Self:
        if len(self.layers) != self.d + 1:
            raise ValueError(f"expected {self.d + 1} layer sizes, got {len(self.layers)}")
        if self.layers[0] != 1 or self.layers[-1] != 1:
            raise ValueError("source and sink layers must have exactly one vertex")
        if min(self.layers) < 1:
            raise ValueError("every layer needs at least one vertex")
        if len(self.edges) != self.d:
            raise ValueError(f"expected {self.d} edge layers, got {len(self.edges)}")
        return self

    @model_validator(mode="after")
    def validate_edges(self) -> Self:
        labels = []
        for k, layer in enumerate(self.edges):
            seen = set()
            for edge in layer:
                if edge.source > self.layers[k] or edge.target > self.layers[k + 1]:
                    raise ValueError(f"edge {edge.source}->{edge.target} leaves layers {k}/{k + 1}")
                if (edge.source, edge.target) in seen:
                    raise ValueError(f"duplicate edge {edge.source}->{edge.target} in layer {k}")
                if edge.label.m != self.m:
                    raise ValueError(f"label of length {edge.label.m} in an ABP with m={self.m}")
                seen.add((edge.source, edge.target))
                labels.extend(edge.label.coefficients)
        common_field(labels)
        return self

    @property
    def width(self) -> int:
        return max(self.layers)

    @property
    def field(self) -> FieldKind:
        return common_field(c for layer in self.edges for e in layer for c in e.label.coefficients)

    def _index(self) -> None:
        out: List[Dict[int, List[Tuple[int, LinearForm]]]] = []
        labels: List[Dict[Tuple[int, int], LinearForm]] = []
        for layer in self.edges:
            adjacency: Dict[int, List[Tuple[int, LinearForm]]] = {}
            lookup: Dict[Tuple[int, int], LinearForm] = {}
            for edge in sorted(layer, key=lambda e: (e.source, e.target)):
                if edge.label.is_zero():
                    continue
                adjacency.setdefault(edge.source, []).append((edge.target, edge.label))
                lookup[(edge.source, edge.target)] = edge.label
            out.append(adjacency)
            labels.append(lookup)
        self._out = out
        self._labels = labels

    def out_edges(self, k: int, u: int) -> List[Tuple[int, LinearForm]]:
        """Nonzero edges leaving vertex u of layer k, sorted by target."""
        if self._out is None:
            self._index()
        return self._out[k].get(u, [])

    def label(self, k: int, u: int, v: int) -> Optional[LinearForm]:
        """Label of edge u->v between layers k and k+1, or None when it is absent or zero."""
        if self._labels is None:
            self._index()
        return self._labels[k].get((u, v))


def _zero_form(m: int, field: FieldKind) -> LinearForm:
    return LinearForm(coefficients=(zero_of(field),) * m)


def abp_from_waring(p: WaringPoint) -> NcAbp:
    """One disjoint source-sink path per Waring term; the coefficient sits on the first edge."""
    if p.d < 1:
        raise PreconditionError("cannot build an ABP of degree 0")
    d, m, field = p.d, p.m, p.field
    r = p.rank
    if r == 0:
        zero = _zero_form(m, field)
        return NcAbp(
            d=d, m=m, layers=[1] * (d + 1),
            edges=[[AbpEdge(source=1, target=1, label=zero)] for _ in range(d)],
        )
    first = [t.form.scaled(t.c) for t in p.terms]
    if d == 1:
        summed = tuple(
            sum((f.coefficients[j] for f in first), zero_of(field)) for j in range(m)
        )
        return NcAbp(d=1, m=m, layers=[1, 1], edges=[[AbpEdge(source=1, target=1, label=LinearForm(coefficients=summed))]])
    edges: List[List[AbpEdge]] = [[AbpEdge(source=SOURCE, target=i + 1, label=first[i]) for i in range(r)]]
    for _ in range(1, d - 1):
        edges.append([AbpEdge(source=i + 1, target=i + 1, label=t.form) for i, t in enumerate(p.terms)])
    edges.append([AbpEdge(source=i + 1, target=SINK, label=t.form) for i, t in enumerate(p.terms)])
    return NcAbp(d=d, m=m, layers=[1] + [r] * (d - 1) + [1], edges=edges)


def abp_chow(forms: Sequence[LinearForm]) -> NcAbp:
    """Subset-lattice ABP of the product of the given forms; source edges carry 1/d!."""
    d = len(forms)
    if d < 1:
        raise PreconditionError("abp_chow needs at least one linear form")
    m = forms[0].m
    if any(f.m != m for f in forms):
        raise PreconditionError("abp_chow forms must share the variable count")
    common_field(c for f in forms for c in f.coefficients)
    scale = Fraction(1, factorial(d))
    subsets = [list(combinations(range(1, d + 1), k)) for k in range(d + 1)]
    position = [{s: idx + 1 for idx, s in enumerate(layer)} for layer in subsets]
    edges: List[List[AbpEdge]] = []
    for k in range(d):
        layer_edges = []
        for u in subsets[k]:
            for i in range(1, d + 1):
                if i in u:
                    continue
                form = forms[i - 1]
                if k == 0:
                    form = LinearForm(coefficients=tuple(mul_rational(c, scale) for c in form.coefficients))
                v = tuple(sorted(u + (i,)))
                layer_edges.append(AbpEdge(source=position[k][u], target=position[k + 1][v], label=form))
        edges.append(layer_edges)
    return NcAbp(d=d, m=m, layers=[len(layer) for layer in subsets], edges=edges)


def abp_eval_dense(abp: NcAbp) -> DensePoly:
    """Commutative polynomial computed at the sink, carried one coefficient map per vertex."""
    m = abp.m
    states: Dict[int, Dict[Tuple[int, ...], Any]] = {SOURCE: {(0,) * m: 1}}
    for k in range(abp.d):
        nxt: Dict[int, Dict[Tuple[int, ...], Any]] = {}
        for u, terms in states.items():
            for v, label in abp.out_edges(k, u):
                acc = nxt.setdefault(v, {})
                for alpha, c in multiply_by_form(terms, label).items():
                    acc[alpha] = acc.get(alpha, 0) + c
        states = nxt
        logger.debug("dense layer %d: %d live vertices", k + 1, len(states))
    return DensePoly.from_terms(abp.d, m, states.get(SINK, {}))


def residual_basis(p: DensePoly, k: int) -> Tuple[List[DensePoly], List[Tuple[int, ...]]]:
    """Echelon basis of the contractions of p by size-k words, and the pivot column multisets."""
    flat = flattening(p, k)
    reduced, pivots = row_echelon(flat.entries)
    degree = p.d - k
    basis = []
    for row in reduced:
        terms = {}
        for col, value in zip(flat.columns, row):
            if not value:
                continue
            beta = exponent_of(col, p.m)
            terms[beta] = mul_rational(value, Fraction(factorial(degree), alpha_factorial(beta)))
        basis.append(DensePoly.from_terms(degree, p.m, terms))
    return basis, [flat.columns[c] for c in pivots]


def abp_minimize(p: DensePoly) -> NcAbp:
    """Minimal-width ncABP whose layer-k states span the k-th residual space of p."""
    if p.is_zero():
        raise PreconditionError("the zero polynomial has no minimal ABP")
    d, m = p.d, p.m
    if d < 1:
        raise PreconditionError("cannot build an ABP of degree 0")
    states: List[List[DensePoly]] = [[p]]
    pivots: List[List[Tuple[int, ...]]] = [[]]
    for k in range(1, d + 1):
        basis, pivot_words = residual_basis(p, k)
        states.append(basis)
        pivots.append(pivot_words)
    edges: List[List[AbpEdge]] = []
    for k in range(d):
        layer_edges = []
        for a, t_a in enumerate(states[k]):
            for b, word in enumerate(pivots[k + 1]):
                coefficients = tuple(tensor_coeff(t_a, (j,) + word) for j in range(1, m + 1))
                if any(coefficients):
                    layer_edges.append(
                        AbpEdge(source=a + 1, target=b + 1, label=LinearForm(coefficients=coefficients))
                    )
        edges.append(layer_edges)
    layers = [len(s) for s in states]
    logger.info("minimal ABP layer sizes %s", layers)
    return NcAbp(d=d, m=m, layers=layers, edges=edges)


def abp_layer_ranks(p: DensePoly) -> List[int]:
    """Flattening ranks for k = 0..d."""
    return [flattening(p, k).rank() for k in range(p.d + 1)]


def ncw(p: DensePoly) -> int:
    if p.is_zero():
        raise PreconditionError("ncw of the zero polynomial is undefined")
    return max(abp_layer_ranks(p))
