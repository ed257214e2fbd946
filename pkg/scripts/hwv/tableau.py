from __future__ import annotations

import logging
from collections import Counter
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator
from typing_extensions import Self

from .utils import DEFAULT_ENUMERATION_CAP, CapExceededError, LayeredGraphError, PreconditionError

logger = logging.getLogger(__name__)

Column = Tuple[int, ...]


class Partition(BaseModel):
    """Weakly decreasing positive parts; on the wire a bare list."""
    model_config = ConfigDict(frozen=True)

    parts: Tuple[int, ...]

    @model_validator(mode="before")
    @classmethod
    def accept_bare_list(cls, values: Any) -> Any:
        if isinstance(values, (list, tuple)):
            return {"parts": tuple(values)}
        return values

    @model_validator(mode="after")
    def validate_parts(self) -> Self:
        if any(p < 1 for p in self.parts):
            raise ValueError(f"partition parts must be positive: {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"partition must be weakly decreasing: {self.parts}")
        return self

    @model_serializer
    def serialize(self) -> List[int]:
        return list(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def transpose(self) -> Partition:
        if not self.parts:
            return Partition(parts=())
        return Partition(parts=tuple(sum(1 for p in self.parts if p >= i) for i in range(1, self.parts[0] + 1)))

    def __len__(self) -> int:
        return len(self.parts)


class Content(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    d: int = Field(ge=1)


class Tableau(BaseModel):
    """
    Row-major Young tableau with declared content n x d.
    Structural checks (shape, content) live in tableau_validate so that bad
    tableaux can still be loaded and diagnosed.
    """
    model_config = ConfigDict(frozen=True)

    rows: Tuple[Tuple[int, ...], ...]
    content: Content

    @property
    def n(self) -> int:
        return self.content.n

    @property
    def d(self) -> int:
        return self.content.d

    @property
    def shape(self) -> Partition:
        return Partition(parts=tuple(len(r) for r in self.rows))

    @property
    def num_columns(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def columns(self) -> List[Column]:
        return [
            tuple(row[c] for row in self.rows if len(row) > c)
            for c in range(self.num_columns)
        ]

    def pretty(self) -> str:
        return "/".join(",".join(str(x) for x in row) for row in self.rows)


def tableau_validate(t: Tableau) -> Optional[str]:
    """Returns None for a well-formed tableau, else a message naming the first violation."""
    for i, row in enumerate(t.rows):
        if not row:
            return f"row {i + 1} is empty"
    lengths = [len(r) for r in t.rows]
    for i in range(1, len(lengths)):
        if lengths[i] > lengths[i - 1]:
            return f"row {i + 1} is longer than row {i}"
    n, d = t.content.n, t.content.d
    counts = Counter(x for row in t.rows for x in row)
    for value in sorted(counts):
        if value < 1 or value > n:
            return f"entry {value} outside 1..{n}"
    for value in range(1, n + 1):
        if counts[value] != d:
            return f"value {value} occurs {counts[value]} times, expected {d}"
    return None


def require_valid(t: Tableau) -> None:
    problem = tableau_validate(t)
    if problem is not None:
        raise PreconditionError(f"invalid tableau {t.pretty()}: {problem}")


def is_semistandard(t: Tableau) -> bool:
    for row in t.rows:
        if any(a > b for a, b in zip(row, row[1:])):
            return False
    return all(all(a < b for a, b in zip(col, col[1:])) for col in t.columns)


def has_column_repeat(t: Tableau) -> bool:
    return any(len(set(col)) != len(col) for col in t.columns)


def tableau_from_columns(columns: Sequence[Sequence[int]], n: int, d: int) -> Tableau:
    """Assemble a tableau from columns listed left to right; lengths must be weakly decreasing."""
    columns = [tuple(c) for c in columns]
    if any(len(a) < len(b) for a, b in zip(columns, columns[1:])):
        raise PreconditionError("column lengths must be weakly decreasing")
    height = len(columns[0]) if columns else 0
    rows = tuple(tuple(c[r] for c in columns if len(c) > r) for r in range(height))
    return Tableau(rows=rows, content=Content(n=n, d=d))


def lift_blocks(t: Tableau, column_order: Optional[Sequence[int]] = None, strict: bool = True) -> Tableau:
    """
    Replace every entry a by the smallest unused number of block a, visiting
    columns in column_order and each column top to bottom.
    """
    require_valid(t)
    if strict and has_column_repeat(t):
        raise PreconditionError(f"tableau {t.pretty()} has a column with a repeated entry")
    columns = t.columns
    order = list(range(len(columns))) if column_order is None else list(column_order)
    if sorted(order) != list(range(len(columns))):
        raise PreconditionError(f"column order {order} is not a permutation of {len(columns)} columns")
    d = t.d
    used: Dict[int, int] = {}
    lifted: List[List[int]] = [list(col) for col in columns]
    for c in order:
        for r, a in enumerate(columns[c]):
            used[a] = used.get(a, 0) + 1
            lifted[c][r] = (a - 1) * d + used[a]
    return tableau_from_columns(lifted, t.n * d, 1)


def hat_blocks(t: Tableau, d: int) -> Tableau:
    """Inverse of lift_blocks: entry a becomes its block index ceil(a/d)."""
    if t.content.d != 1 or t.content.n % d:
        raise PreconditionError(f"content {t.content.n}x{t.content.d} is not a lift with block size {d}")
    rows = tuple(tuple((a + d - 1) // d for a in row) for row in t.rows)
    return Tableau(rows=rows, content=Content(n=t.content.n // d, d=d))


class TableauGraph(BaseModel):
    """Multigraph on 1..n; the multiplicity of {i,j} counts in-column pairs."""
    model_config = ConfigDict(frozen=True)

    n: int
    multiplicities: Dict[Tuple[int, int], int]

    @model_serializer
    def serialize(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "edges": [{"u": u, "v": v, "mult": k} for (u, v), k in sorted(self.multiplicities.items())],
        }

    def degree(self, v: int) -> int:
        return sum(k for e, k in self.multiplicities.items() if v in e)

    def degrees(self) -> List[int]:
        return [self.degree(v) for v in range(1, self.n + 1)]

    def simple_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.n + 1))
        graph.add_edges_from(self.multiplicities)
        return graph


def tableau_graph(t: Tableau) -> TableauGraph:
    if has_column_repeat(t):
        raise PreconditionError(f"tableau {t.pretty()} has a column with a repeated entry")
    multiplicities: Dict[Tuple[int, int], int] = {}
    for col in t.columns:
        entries = sorted(col)
        for a in range(len(entries)):
            for b in range(a + 1, len(entries)):
                key = (entries[a], entries[b])
                multiplicities[key] = multiplicities.get(key, 0) + 1
    return TableauGraph(n=t.n, multiplicities=multiplicities)


def enumerate_ssyt(shape: Partition, n: int, d: int, cap: int = DEFAULT_ENUMERATION_CAP) -> List[Tableau]:
    """All semistandard tableaux of the shape with content n x d, in row-major lexicographic order."""
    if shape.size != n * d:
        raise PreconditionError(f"shape of size {shape.size} cannot hold content {n}x{d}")
    cells = [(r, c) for r, length in enumerate(shape.parts) for c in range(length)]
    grid = [[0] * length for length in shape.parts]
    remaining = [0] + [d] * n
    heights = shape.transpose().parts
    results: List[Tableau] = []

    def backtrack(pos: int) -> None:
        if pos == len(cells):
            if len(results) >= cap:
                raise CapExceededError(f"more than {cap} semistandard tableaux of shape {shape.parts}")
            results.append(Tableau(rows=tuple(tuple(r) for r in grid), content=Content(n=n, d=d)))
            return
        r, c = cells[pos]
        low = 1
        if c > 0:
            low = max(low, grid[r][c - 1])
        if r > 0:
            low = max(low, grid[r - 1][c] + 1)
        # the cells below in this column need strictly larger values
        high = n - (heights[c] - 1 - r)
        for value in range(low, n + 1):
            if value > high:
                break
            if not remaining[value]:
                continue
            grid[r][c] = value
            remaining[value] -= 1
            backtrack(pos + 1)
            remaining[value] += 1
        grid[r][c] = 0

    backtrack(0)
    logger.debug("enumerated %d semistandard tableaux of shape %s", len(results), shape.parts)
    return results


def enumerate_standard(shape: Partition, cap: int = DEFAULT_ENUMERATION_CAP) -> List[Tableau]:
    """All standard tableaux of the shape, built by placing 1..N one corner at a time."""
    total = shape.size
    grid: List[List[int]] = [[] for _ in shape.parts]
    results: List[Tableau] = []

    def backtrack(value: int) -> None:
        if value > total:
            if len(results) >= cap:
                raise CapExceededError(f"more than {cap} standard tableaux of shape {shape.parts}")
            results.append(Tableau(rows=tuple(tuple(r) for r in grid), content=Content(n=total, d=1)))
            return
        for r, length in enumerate(shape.parts):
            if len(grid[r]) == length:
                continue
            if r > 0 and len(grid[r - 1]) <= len(grid[r]):
                continue
            grid[r].append(value)
            backtrack(value + 1)
            grid[r].pop()

    backtrack(1)
    return results


class LayeredEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: int
    v: int
    mult: int = Field(default=1, ge=1)


class LayeredMultigraph(BaseModel):
    model_config = ConfigDict(frozen=True)

    layers: List[List[int]]
    edges: List[LayeredEdge]


def layered_multigraph_to_tableau(graph: LayeredMultigraph) -> Tableau:
    """
    Two-row semistandard tableau whose graph is the given regular layered multigraph.
    One column (u/v) per unit edge, edges between each pair of layers taken left to right.
    """
    layer_of: Dict[int, int] = {}
    for j, layer in enumerate(graph.layers):
        for v in layer:
            if v in layer_of:
                raise LayeredGraphError(1, f"vertex {v} appears in two layers")
            layer_of[v] = j
    n = len(layer_of)
    if sorted(layer_of) != list(range(1, n + 1)):
        raise LayeredGraphError(1, f"vertices must be exactly 1..{n}")

    between: List[List[Tuple[int, int]]] = [[] for _ in graph.layers]
    degree = Counter()
    for edge in graph.edges:
        u, v = sorted((edge.u, edge.v))
        if u not in layer_of or v not in layer_of:
            raise LayeredGraphError(1, f"edge {{{edge.u},{edge.v}}} uses an unknown vertex")
        if layer_of[v] != layer_of[u] + 1:
            raise LayeredGraphError(2, f"edge {{{u},{v}}} does not join consecutive layers")
        between[layer_of[u]].extend([(u, v)] * edge.mult)
        degree[u] += edge.mult
        degree[v] += edge.mult

    for j, layer in enumerate(graph.layers):
        if not layer or layer != list(range(layer[0], layer[0] + len(layer))):
            raise LayeredGraphError(4, f"layer {j} is not an ascending run of consecutive labels")
        if j > 0 and graph.layers[j - 1][-1] > layer[0]:
            raise LayeredGraphError(4, f"layer {j} has labels below those of layer {j - 1}")

    for j, pairs in enumerate(between):
        pairs.sort()
        for (u1, v1), (u2, v2) in zip(pairs, pairs[1:]):
            if v2 < v1:
                raise LayeredGraphError(3, f"edges {{{u1},{v1}}} and {{{u2},{v2}}} cross between layers {j} and {j + 1}")

    degrees = set(degree[v] for v in range(1, n + 1))
    if len(degrees) != 1 or 0 in degrees:
        raise LayeredGraphError(0, f"multigraph must be regular of positive degree, found degrees {sorted(degrees)}")
    columns = [pair for pairs in between for pair in pairs]
    return tableau_from_columns(columns, n, degrees.pop())


def grid_multigraph(k: int) -> LayeredMultigraph:
    """2k x 2k grid with doubled border edges, layered by anti-diagonals."""
    if k < 1:
        raise PreconditionError("grid family needs k >= 1")
    side = 2 * k
    layers: List[List[int]] = []
    label: Dict[Tuple[int, int], int] = {}
    nxt = 1
    for s in range(2, 2 * side + 1):
        layer = []
        for x in range(1, side + 1):
            y = s - x
            if 1 <= y <= side:
                label[(x, y)] = nxt
                layer.append(nxt)
                nxt += 1
        layers.append(layer)

    doubled = set()
    for i in range(1, k + 1):
        for a, b in (
            ((1, 2 * i - 1), (1, 2 * i)),
            ((side, 2 * i - 1), (side, 2 * i)),
            ((2 * i - 1, 1), (2 * i, 1)),
            ((2 * i - 1, side), (2 * i, side)),
        ):
            doubled.add(frozenset((label[a], label[b])))

    edges = []
    for (x, y), u in label.items():
        for nb in ((x + 1, y), (x, y + 1)):
            if nb in label:
                v = label[nb]
                mult = 2 if frozenset((u, v)) in doubled else 1
                edges.append(LayeredEdge(u=min(u, v), v=max(u, v), mult=mult))
    return LayeredMultigraph(layers=layers, edges=sorted(edges, key=lambda e: (e.u, e.v)))


def grid_family(k: int) -> Tableau:
    t = layered_multigraph_to_tableau(grid_multigraph(k))
    logger.info("grid family k=%d: %d columns, content %dx%d", k, t.num_columns, t.n, t.d)
    return t
