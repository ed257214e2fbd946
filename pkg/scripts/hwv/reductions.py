"""
3-coloring instances as tableau evaluations.

Every edge {u,v} becomes repeated columns (u/v) and every vertex is padded with
single-box columns up to d occurrences. At the decision point the determinant of
two distinct forms is nonzero and every column appears an even number of times;
at the counting point those determinants are 6th roots of unity and every column
appears a multiple of six times.
"""
import logging
from itertools import product
from typing import Dict, List, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from .polynomial import WaringPoint
from .scalar import Zeta6
from .tableau import Column, Tableau, tableau_from_columns
from .utils import DEFAULT_BRUTEFORCE_VERTEX_CAP, DEFAULT_VANDERMONDE_CAP, PreconditionError

logger = logging.getLogger(__name__)

DECISION_COPIES = 2
COUNTING_COPIES = 6


class SimpleGraph(BaseModel):
    """Simple graph on 1..n; edges are stored as sorted pairs."""
    model_config = ConfigDict(frozen=True)

    n: int
    edges: List[Tuple[int, int]] = []

    @model_validator(mode="after")
    def validate_edges(self) -> Self:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u}, {v}) leaves 1..{self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        return self

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return sorted((min(u, v), max(u, v)) for u, v in self.edges)

    def degrees(self) -> Dict[int, int]:
        degree = {v: 0 for v in range(1, self.n + 1)}
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return degree

    def max_degree_vertex(self) -> Tuple[int, int]:
        """(vertex, degree) of the smallest vertex attaining the maximum degree."""
        degree = self.degrees()
        if not degree:
            return 0, 0
        top = max(degree.values())
        return min(v for v, k in degree.items() if k == top), top

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(self.pairs)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "SimpleGraph":
        """Relabel the nodes of graph to 1..n in sorted order."""
        label = {v: i + 1 for i, v in enumerate(sorted(graph.nodes))}
        return cls(n=len(label), edges=[(label[u], label[v]) for u, v in graph.edges])


def _coloring_tableau(graph: SimpleGraph, d: int, copies: int) -> Tableau:
    vertex, top = graph.max_degree_vertex()
    minimal = max(copies * top, 1)
    if d < minimal:
        raise PreconditionError(
            f"d={d} is too small: vertex {vertex} has degree {top}, needs d >= {minimal}"
        )
    columns: List[Column] = []
    for pair in graph.pairs:
        columns.extend([pair] * copies)
    for v, k in graph.degrees().items():
        columns.extend([(v,)] * (d - copies * k))
    columns.sort(key=lambda col: (-len(col), col))
    return tableau_from_columns(columns, graph.n, d)


def gen_3col_decision(graph: SimpleGraph, d: int) -> Tuple[Tableau, WaringPoint]:
    """Nonzero evaluation iff the graph is 3-colorable."""
    t = _coloring_tableau(graph, d, DECISION_COPIES)
    p = WaringPoint.from_forms(d, [(1, 0), (1, 1), (1, 2)])
    logger.info("decision instance: n=%d, d=%d, %d columns", graph.n, d, t.num_columns)
    return t, p


def gen_3col_counting(graph: SimpleGraph, d: int) -> Tuple[Tableau, WaringPoint]:
    """Evaluation equals the number of proper 3-colorings."""
    t = _coloring_tableau(graph, d, COUNTING_COPIES)
    zeta = Zeta6.zeta()
    one, zero = Zeta6(1), Zeta6(0)
    p = WaringPoint.from_forms(d, [(one, zero), (one, zeta), (one, zeta * zeta)], [one, one, one])
    logger.info("counting instance: n=%d, d=%d, %d columns", graph.n, d, t.num_columns)
    return t, p


def count_colorings_bruteforce(graph: SimpleGraph, cap: int = DEFAULT_BRUTEFORCE_VERTEX_CAP) -> int:
    if graph.n > cap:
        raise PreconditionError(f"brute force is capped at {cap} vertices, graph has {graph.n}")
    pairs = graph.pairs
    return sum(
        1
        for colors in product(range(3), repeat=graph.n)
        if all(colors[u - 1] != colors[v - 1] for u, v in pairs)
    )


def vandermonde_point(m: int, r: int, d: int, cap: int = DEFAULT_VANDERMONDE_CAP) -> WaringPoint:
    """Sum of d-th powers of the moment forms (1, i, ..., i^(m-1)) for i = 1..r."""
    if m < 1:
        raise PreconditionError("vandermonde point needs m >= 1")
    if not 0 <= r <= cap:
        raise PreconditionError(f"rank {r} outside 0..{cap}")
    if r == 0:
        return WaringPoint(d=d, m=m, terms=[])
    return WaringPoint.from_forms(d, [[i ** k for k in range(m)] for i in range(1, r + 1)])
