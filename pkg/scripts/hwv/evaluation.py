"""
Evaluators for the highest weight vector of a tableau at a symmetric tensor.

All three compute the same sum over proper placements of the product of the
columnwise top-square determinants:
  eval_naive      enumerates block -> Waring term maps
  eval_abp        forward DP over columns, keyed by the path endpoint of every block
  eval_treewidth  bottom-up matrix products over a computation tree
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .abp import NcAbp, abp_minimize
from .linalg import top_square_det
from .polynomial import DensePoly, WaringPoint
from .scalar import coerce_to_field, zero_of
from .tableau import Tableau, has_column_repeat, require_valid
from .treedec import ComputationTree
from .utils import FieldKind, PreconditionError

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]


def _lower(x):
    """Integral Fractions become ints; exact arithmetic on ints is much cheaper."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _result(value, field: FieldKind):
    return coerce_to_field(value, field)


def _check_shape(t: Tableau, d: int, m: int) -> None:
    require_valid(t)
    if d != t.d:
        raise PreconditionError(f"degree mismatch: tableau has d={t.d}, point has d={d}")
    if t.rows and len(t.rows) > m:
        raise PreconditionError(f"shape exceeds variable count: {len(t.rows)} rows, m={m}")


def _placement_sum(t: Tableau, p: WaringPoint, first_choices: Sequence[int]):
    forms = [tuple(_lower(c) for c in term.form.coefficients) for term in p.terms]
    coefficients = [_lower(term.c) for term in p.terms]
    columns = t.columns
    r = p.rank
    dets: Dict[Tuple[int, Tuple[int, ...]], Any] = {}
    total = 0
    for first in first_choices:
        for rest in product(range(r), repeat=t.n - 1):
            phi = (first,) + rest
            value = 1
            for i in phi:
                value = value * coefficients[i]
            if not value:
                continue
            for c, col in enumerate(columns):
                choice = tuple(phi[a - 1] for a in col)
                key = (c, choice)
                if key not in dets:
                    dets[key] = top_square_det([forms[j] for j in choice])
                value = value * dets[key]
                if not value:
                    break
            total = total + value
    return total


def eval_naive(t: Tableau, p: WaringPoint, threads: int = 1, stats: Optional[Dict[str, int]] = None):
    """Sum over all maps from blocks to Waring terms; parallel over the choice for block 1."""
    field = p.field
    _check_shape(t, p.d, p.m)
    if has_column_repeat(t):
        return zero_of(field)
    if t.n == 0:
        return _result(1, field)
    r = p.rank
    if stats is not None:
        stats["placements"] = r ** t.n
    logger.info("naive evaluation over %d placements", r ** t.n)
    if threads > 1 and r > 1:
        with ProcessPoolExecutor(max_workers=min(threads, r)) as pool:
            parts = list(pool.map(_placement_sum, [t] * r, [p] * r, [[i] for i in range(r)]))
        total = 0
        for part in parts:
            total = total + part
    else:
        total = _placement_sum(t, p, range(r))
    return _result(total, field)


def _label_table(abp: NcAbp) -> List[Dict[int, List[Tuple[int, Tuple]]]]:
    """Per layer: vertex -> [(target, lowered label coefficients)]."""
    table = []
    for k in range(abp.d):
        table.append({
            u: [(v, tuple(_lower(c) for c in label.coefficients)) for v, label in abp.out_edges(k, u)]
            for u in range(1, abp.layers[k] + 1)
        })
    return table


def eval_abp(t: Tableau, abp: NcAbp, stats: Optional[Dict[str, int]] = None):
    """Forward DP over the columns; a state is the endpoint vertex of every block's path."""
    field = abp.field
    _check_shape(t, abp.d, abp.m)
    if has_column_repeat(t):
        return zero_of(field)
    out = _label_table(abp)
    states: Dict[Key, Any] = {(1,) * t.n: 1}
    depth = [0] * (t.n + 1)
    peak = 1
    for c, col in enumerate(t.columns):
        nxt: Dict[Key, Any] = {}
        for state, value in states.items():
            options = [out[depth[a]][state[a - 1]] for a in col]
            for choice in product(*options):
                det = top_square_det([label for _, label in choice])
                if not det:
                    continue
                target = list(state)
                for a, (v, _) in zip(col, choice):
                    target[a - 1] = v
                key = tuple(target)
                nxt[key] = nxt.get(key, 0) + value * det
        states = {k: v for k, v in nxt.items() if v}
        for a in col:
            depth[a] += 1
        peak = max(peak, len(states))
        logger.debug("column %d: %d live states", c + 1, len(states))
    if stats is not None:
        stats["max_states"] = peak
    return _result(states.get((1,) * t.n, 0), field)


def _lift(
    table: Dict[Tuple[Key, Key], Any],
    child_bag: Key,
    bag: Key,
    ranges: Dict[int, int],
) -> Dict[Key, Dict[Key, Any]]:
    """
    Re-index a child matrix over the parent's bag. Child coordinates outside the
    parent bag must sit at index 1; parent coordinates outside the child bag stay put
    across the child's span and range over ranges[i].
    """
    position = {i: idx for idx, i in enumerate(child_bag)}
    bag_set = set(bag)
    dropped = [position[i] for i in child_bag if i not in bag_set]
    free = [i for i in bag if i not in position]
    free_choices = list(product(*(range(1, ranges[i] + 1) for i in free)))
    lifted: Dict[Key, Dict[Key, Any]] = {}
    for (start, end), value in table.items():
        if any(start[p] != 1 or end[p] != 1 for p in dropped):
            continue
        for choice in free_choices:
            fixed = dict(zip(free, choice))
            a = tuple(start[position[i]] if i in position else fixed[i] for i in bag)
            b = tuple(end[position[i]] if i in position else fixed[i] for i in bag)
            row = lifted.setdefault(a, {})
            row[b] = row.get(b, 0) + value
    return lifted


def eval_treewidth(t: Tableau, abp: NcAbp, ct: ComputationTree, stats: Optional[Dict[str, int]] = None):
    """Bottom-up over the computation tree; D[v] maps (start, end) boundary tuples over the bag of v to values."""
    field = abp.field
    _check_shape(t, abp.d, abp.m)
    if has_column_repeat(t):
        return zero_of(field)
    columns = t.columns
    if (ct.n, ct.d) != (t.n, t.d) or sorted(ct.leaf_columns) != list(range(len(columns))):
        raise PreconditionError("computation tree was not built from this tableau")
    for node in ct.nodes:
        if node.is_leaf and node.entries != columns[node.column]:
            raise PreconditionError(f"computation tree leaf {node.id} does not match column {node.column}")
    if not columns:
        return _result(1, field)

    out = _label_table(abp)
    widths = abp.layers

    def width_at(sep: int, i: int) -> int:
        return widths[ct.kappa(sep, i)]

    tables: Dict[int, Dict[Tuple[Key, Key], Any]] = {}
    largest = 0
    for node in reversed(ct.nodes):
        if node.is_leaf:
            col = node.entries
            position = {i: idx for idx, i in enumerate(node.bag)}
            sep = node.traversal - 1
            options = []
            for a in col:
                layer = ct.kappa(sep, a)
                options.append([(u, v, label) for u in range(1, widths[layer] + 1) for v, label in out[layer][u]])
            table: Dict[Tuple[Key, Key], Any] = {}
            for choice in product(*options):
                det = top_square_det([label for _, _, label in choice])
                if not det:
                    continue
                start = [0] * len(col)
                end = [0] * len(col)
                for a, (u, v, _) in zip(col, choice):
                    start[position[a]] = u
                    end[position[a]] = v
                table[(tuple(start), tuple(end))] = det
            tables[node.id] = table
        elif len(node.children) == 1:
            tables[node.id] = tables.pop(node.children[0])
        else:
            left, right = (ct.nodes[c] for c in node.children)
            start_sep, mid_sep, end_sep = node.leftmost - 1, node.mid, node.rightmost
            left_ranges = {i: min(width_at(start_sep, i), width_at(mid_sep, i)) for i in node.bag}
            right_ranges = {i: min(width_at(mid_sep, i), width_at(end_sep, i)) for i in node.bag}
            lifted_left = _lift(tables.pop(left.id), left.bag, node.bag, left_ranges)
            lifted_right = _lift(tables.pop(right.id), right.bag, node.bag, right_ranges)
            table = {}
            for start, row in lifted_left.items():
                for mid, a in row.items():
                    for end, b in lifted_right.get(mid, {}).items():
                        key = (start, end)
                        table[key] = table.get(key, 0) + a * b
            tables[node.id] = {k: v for k, v in table.items() if v}
        largest = max(largest, len(tables[node.id]))
        logger.debug("node %d (bag %s): %d nonzero entries", node.id, node.bag, len(tables[node.id]))
    if stats is not None:
        stats["max_matrix_entries"] = largest
        stats["max_bag"] = max(len(n.bag) for n in ct.nodes)
    root = ct.nodes[ct.root]
    ones = (1,) * len(root.bag)
    return _result(tables[root.id].get((ones, ones), 0), field)


def eval_dense(t: Tableau, p: DensePoly, stats: Optional[Dict[str, int]] = None):
    """Evaluate at a dense polynomial through its minimal ncABP."""
    if p.is_zero():
        _check_shape(t, p.d, p.m)
        return zero_of(p.field)
    return eval_abp(t, abp_minimize(p), stats=stats)
