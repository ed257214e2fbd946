"""
Tree decompositions of tableau graphs and the binary computation tree that
drives the treewidth evaluator.

Computation tree construction:
  1. attach every column as a leaf to the lowest-id bag containing its entries
  2. prune to the subtree spanned by the column leaves
  3. root at the smallest-id remaining bag; column leaves come before bags among children
  4. binarize, the added nodes copying the bag of the node they split
  5. optionally drop vertices from bags that do not lie between two leaves using them
  6. a node with one child takes over the child's bag
"""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Set, Tuple

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in
from pydantic import BaseModel, ConfigDict, model_validator
from typing_extensions import Self

from .tableau import Tableau, has_column_repeat, require_valid, tableau_graph
from .utils import PreconditionError

logger = logging.getLogger(__name__)


class TreeDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    bags: List[Tuple[int, ...]]
    tree_edges: List[Tuple[int, int]] = []

    @model_validator(mode="after")
    def validate_tree(self) -> Self:
        if not self.bags:
            raise ValueError("a tree decomposition needs at least one bag")
        for a, b in self.tree_edges:
            if not (0 <= a < len(self.bags) and 0 <= b < len(self.bags)):
                raise ValueError(f"tree edge ({a}, {b}) names a missing bag")
        if not nx.is_tree(self.tree()):
            raise ValueError("tree_edges do not form a tree over the bags")
        return self

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def tree(self) -> nx.Graph:
        tree = nx.Graph()
        tree.add_nodes_from(range(len(self.bags)))
        tree.add_edges_from(self.tree_edges)
        return tree


def validate_decomposition(graph: nx.Graph, td: TreeDecomposition) -> Optional[str]:
    """Returns None when td is a tree decomposition of graph, else the first violated property."""
    covered = set().union(*map(set, td.bags))
    for v in sorted(graph.nodes):
        if v not in covered:
            return f"vertex {v} is in no bag"
    bag_sets = [set(b) for b in td.bags]
    for u, v in sorted(tuple(sorted(e)) for e in graph.edges):
        if not any(u in b and v in b for b in bag_sets):
            return f"edge {{{u},{v}}} is in no bag"
    tree = td.tree()
    for v in sorted(covered):
        holding = [i for i, b in enumerate(bag_sets) if v in b]
        if not nx.is_connected(tree.subgraph(holding)):
            return f"bags containing vertex {v} are not connected"
    return None


def minfill_decomposition(graph: nx.Graph) -> TreeDecomposition:
    """Min-fill elimination decomposition; bags are numbered in lexicographic order."""
    ordered = nx.Graph()
    ordered.add_nodes_from(sorted(graph.nodes))
    ordered.add_edges_from(sorted(tuple(sorted(e)) for e in graph.edges))
    if ordered.number_of_nodes() == 0:
        return TreeDecomposition(bags=[()], tree_edges=[])
    width, decomposition = treewidth_min_fill_in(ordered)
    bags = sorted(tuple(sorted(b)) for b in decomposition.nodes)
    index = {frozenset(b): i for i, b in enumerate(bags)}
    edges = sorted(tuple(sorted((index[a], index[b]))) for a, b in decomposition.edges)
    logger.info("min-fill decomposition: %d bags, width %d", len(bags), width)
    return TreeDecomposition(bags=bags, tree_edges=edges)


class ComputationNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    bag: Tuple[int, ...]
    children: List[int] = []
    column: Optional[int] = None
    entries: Optional[Tuple[int, ...]] = None
    traversal: Optional[int] = None
    leftmost: int
    rightmost: int
    mid: Optional[int] = None
    origin: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return self.column is not None


class ComputationTree(BaseModel):
    """Rooted binary tree with one leaf per tableau column; node ids follow DFS preorder."""
    model_config = ConfigDict(frozen=True)

    n: int
    d: int
    root: int
    nodes: List[ComputationNode]
    leaf_columns: List[int]
    kappa_table: List[Tuple[int, ...]]

    @property
    def num_leaves(self) -> int:
        return len(self.leaf_columns)

    def kappa(self, t: int, i: int) -> int:
        return self.kappa_table[t][i - 1]

    def violations(self) -> Optional[str]:
        """First broken structural invariant, or None."""
        if not self.leaf_columns:
            return None
        for node in self.nodes:
            if len(node.children) > 2:
                return f"node {node.id} has {len(node.children)} children"
            if node.is_leaf:
                if node.children:
                    return f"leaf {node.id} has children"
                if node.leftmost != node.traversal or node.rightmost != node.traversal:
                    return f"leaf {node.id} has inconsistent traversal bounds"
                continue
            if not node.children:
                return f"internal node {node.id} has no children"
            kids = [self.nodes[c] for c in node.children]
            if len(kids) == 1:
                if kids[0].bag != node.bag:
                    return f"one-child node {node.id} does not share its child's bag"
                continue
            left, right = kids
            if node.leftmost != left.leftmost or node.rightmost != right.rightmost:
                return f"node {node.id} bounds differ from its children"
            if left.rightmost != right.leftmost - 1:
                return f"children of node {node.id} are not adjacent in traversal order"
            if not set(left.bag) & set(right.bag) <= set(node.bag):
                return f"node {node.id} misses part of its children's bag intersection"
        if any(k != 0 for k in self.kappa_table[0]) or any(k != self.d for k in self.kappa_table[-1]):
            return "kappa table does not run from 0 to d"
        return None


def kappa(ct: ComputationTree, t: int, i: int) -> int:
    """Occurrences of i in the columns with traversal index at most t."""
    if not 0 <= t <= ct.num_leaves:
        raise PreconditionError(f"separator {t} outside 0..{ct.num_leaves}")
    if not 1 <= i <= ct.n:
        raise PreconditionError(f"value {i} outside 1..{ct.n}")
    return ct.kappa(t, i)


class _Draft:
    """Mutable node used while the tree is being reshaped."""

    def __init__(self, bag: Set[int], column: Optional[int] = None, origin: Optional[int] = None):
        self.bag = set(bag)
        self.column = column
        self.origin = origin
        self.children: List[_Draft] = []


def _binarize(node: _Draft) -> None:
    for child in node.children:
        _binarize(child)
    while len(node.children) > 2:
        # the first child stays, the rest move under a bag copy
        copy = _Draft(node.bag, origin=node.origin)
        copy.children = node.children[1:]
        node.children = [node.children[0], copy]
        node = copy


def _minimize_bags(root: _Draft, entries: Dict[int, Set[int]], totals: Dict[int, int]) -> None:
    """Keep i in an internal bag only when that node lies between two leaves containing i."""

    def visit(node: _Draft) -> Dict[int, int]:
        if node.column is not None:
            return {i: 1 for i in entries[node.column]}
        below = [visit(child) for child in node.children]
        counts: Dict[int, int] = {}
        for part in below:
            for i, k in part.items():
                counts[i] = counts.get(i, 0) + k
        keep = set()
        for i in node.bag:
            inside = counts.get(i, 0)
            branches = sum(1 for part in below if part.get(i))
            # on the path between two i-leaves: split across children, or some inside and some outside
            if branches >= 2 or (0 < inside < totals.get(i, 0)):
                keep.add(i)
        node.bag = keep
        return counts

    visit(root)


def _copy_single_child_bags(node: _Draft) -> None:
    for child in node.children:
        _copy_single_child_bags(child)
    if len(node.children) == 1:
        node.bag = set(node.children[0].bag)


def build_computation_tree(t: Tableau, td: TreeDecomposition, minimize_bags: bool = False) -> ComputationTree:
    require_valid(t)
    if has_column_repeat(t):
        raise PreconditionError(f"tableau {t.pretty()} has a column with a repeated entry")
    problem = validate_decomposition(tableau_graph(t).simple_graph(), td)
    if problem is not None:
        raise PreconditionError(f"invalid tree decomposition: {problem}")

    columns = t.columns
    if not columns:
        root = ComputationNode(id=0, bag=(), leftmost=0, rightmost=0)
        return ComputationTree(n=t.n, d=t.d, root=0, nodes=[root], leaf_columns=[], kappa_table=[()])
    bag_sets = [set(b) for b in td.bags]
    attach: Dict[int, int] = {}
    for c, col in enumerate(columns):
        holder = next((i for i, b in enumerate(bag_sets) if set(col) <= b), None)
        if holder is None:
            raise PreconditionError(f"column {col} is contained in no bag")
        attach[c] = holder

    graph = nx.Graph()
    graph.add_nodes_from(("bag", i) for i in range(len(td.bags)))
    graph.add_edges_from((("bag", a), ("bag", b)) for a, b in td.tree_edges)
    graph.add_edges_from((("col", c), ("bag", b)) for c, b in attach.items())

    # strip bag nodes hanging off the subtree spanned by the columns
    stripped = True
    while stripped:
        stripped = False
        for node in sorted(graph.nodes):
            if node in graph and node[0] == "bag" and graph.degree(node) <= 1:
                graph.remove_node(node)
                stripped = True
    if not any(node[0] == "bag" for node in graph.nodes):
        graph.add_edges_from((("col", c), ("bag", b)) for c, b in attach.items())

    root_key = min(node for node in graph.nodes if node[0] == "bag")
    drafts: Dict[Tuple[str, int], _Draft] = {}
    for kind, idx in graph.nodes:
        if kind == "bag":
            drafts[(kind, idx)] = _Draft(bag_sets[idx], origin=idx)
        else:
            drafts[(kind, idx)] = _Draft(set(columns[idx]), column=idx, origin=attach[idx])
    for parent, child in nx.bfs_edges(graph, root_key):
        drafts[parent].children.append(drafts[child])
    for draft in drafts.values():
        draft.children.sort(key=lambda ch: (ch.column is None, ch.column if ch.column is not None else ch.origin))
    root = drafts[root_key]

    _binarize(root)
    if minimize_bags:
        entries = {c: set(col) for c, col in enumerate(columns)}
        _minimize_bags(root, entries, {i: t.d for i in range(1, t.n + 1)})
    _copy_single_child_bags(root)

    nodes: List[dict] = []
    leaf_columns: List[int] = []

    def emit(draft: _Draft) -> int:
        my_id = len(nodes)
        record: dict = {"id": my_id, "bag": tuple(sorted(draft.bag)), "origin": draft.origin}
        nodes.append(record)
        if draft.column is not None:
            leaf_columns.append(draft.column)
            position = len(leaf_columns)
            record.update(
                column=draft.column, entries=columns[draft.column], traversal=position,
                leftmost=position, rightmost=position,
            )
            return my_id
        child_ids = [emit(child) for child in draft.children]
        kids = [nodes[c] for c in child_ids]
        record.update(children=child_ids, leftmost=kids[0]["leftmost"], rightmost=kids[-1]["rightmost"])
        if len(kids) == 2:
            record["mid"] = kids[0]["rightmost"]
        else:
            record["mid"] = kids[0].get("mid")
        return my_id

    emit(root)
    table = [tuple([0] * t.n)]
    running = [0] * t.n
    for c in leaf_columns:
        for i in columns[c]:
            running[i - 1] += 1
        table.append(tuple(running))

    tree = ComputationTree(
        n=t.n, d=t.d, root=0,
        nodes=[ComputationNode(**record) for record in nodes],
        leaf_columns=leaf_columns, kappa_table=table,
    )
    logger.debug(
        "computation tree: %d nodes, %d leaves, max bag %d",
        len(tree.nodes), tree.num_leaves, max(len(n.bag) for n in tree.nodes),
    )
    return tree
