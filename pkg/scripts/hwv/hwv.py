"""GL action on points, the two defining checks of a highest weight vector, and multiplicities."""
import logging
import random
from math import comb, prod
from typing import Dict, List, Optional, Sequence

from .evaluation import eval_dense, eval_naive
from .linalg import exact_rank, mat_vec, solve, transpose
from .polynomial import DensePoly, LinearForm, WaringPoint, WaringTerm, compositions, monomial_basis
from .tableau import Partition, Tableau, enumerate_ssyt
from .utils import DEFAULT_ENUMERATION_CAP, DEFAULT_SAMPLE_RANGE, PreconditionError

logger = logging.getLogger(__name__)


def gl_transform_point(g: Sequence[Sequence], p: WaringPoint) -> WaringPoint:
    """Replace every form l_i by g * l_i."""
    if len(g) != p.m or any(len(row) != p.m for row in g):
        raise PreconditionError(f"transformation must be {p.m}x{p.m}")
    terms = [
        WaringTerm(c=term.c, form=LinearForm(coefficients=tuple(mat_vec(g, term.form.coefficients))))
        for term in p.terms
    ]
    return WaringPoint(d=p.d, m=p.m, terms=terms)


def _diag(alpha: Sequence) -> List[list]:
    m = len(alpha)
    return [[alpha[i] if i == j else 0 for j in range(m)] for i in range(m)]


def hwv_weight_check(t: Tableau, p: WaringPoint, alpha: Sequence) -> bool:
    """f(diag(alpha) p) == prod alpha_i^lambda_i * f(p)."""
    if len(alpha) != p.m:
        raise PreconditionError(f"weight vector has length {len(alpha)}, expected {p.m}")
    if not all(alpha):
        raise PreconditionError("weight vector entries must be nonzero")
    factor = 1
    for a, part in zip(alpha, t.shape.parts):
        factor = factor * a ** part
    return eval_naive(t, gl_transform_point(_diag(alpha), p)) == factor * eval_naive(t, p)


def hwv_unipotent_check(t: Tableau, p: WaringPoint, u: Sequence[Sequence]) -> bool:
    """f(u^t p) == f(p) for unit upper-triangular u."""
    m = len(u)
    for i in range(m):
        for j in range(m):
            if (i == j and u[i][j] != 1) or (i > j and u[i][j] != 0):
                raise PreconditionError("u must be upper triangular with unit diagonal")
    return eval_naive(t, gl_transform_point(transpose(u), p)) == eval_naive(t, p)


def _check_multiplicity_args(shape: Partition, n: int, d: int, m: int) -> None:
    if shape.size != n * d:
        raise PreconditionError(f"shape of size {shape.size} does not match n*d = {n * d}")
    if len(shape) > m:
        raise PreconditionError(f"shape has {len(shape)} rows but m={m}")


def random_point(d: int, m: int, rank: int, rng: random.Random, spread: int = DEFAULT_SAMPLE_RANGE) -> WaringPoint:
    forms = [[rng.randint(-spread, spread) for _ in range(m)] for _ in range(rank)]
    return WaringPoint.from_forms(d, forms)


def multiplicity(
    shape: Partition,
    n: int,
    d: int,
    m: int,
    samples: Optional[int] = None,
    seed: int = 0,
    cap: int = DEFAULT_ENUMERATION_CAP,
    stats: Optional[Dict[str, int]] = None,
) -> int:
    """
    Rank of the (SSYT x sample) matrix of evaluations at pseudo-random Waring points
    of rank m+1. A lower bound on the multiplicity, exact with high probability.
    stats receives the tableau and sample counts actually used.
    """
    _check_multiplicity_args(shape, n, d, m)
    tableaux = enumerate_ssyt(shape, n, d, cap=cap)
    samples = (samples or 2 * len(tableaux) + 4) if tableaux else 0
    if stats is not None:
        stats["tableaux"] = len(tableaux)
        stats["samples"] = samples
    if not tableaux:
        return 0
    rng = random.Random(seed)
    points = [random_point(d, m, m + 1, rng) for _ in range(samples)]
    matrix = [[eval_naive(t, p) for p in points] for t in tableaux]
    rank = exact_rank(matrix)
    logger.info("multiplicity of %s: rank %d from %d tableaux and %d samples", shape.parts, rank, len(tableaux), samples)
    return rank


def _lattice_point(beta: Sequence[int], d: int, m: int) -> DensePoly:
    basis = monomial_basis(d, m)
    return DensePoly.from_terms(d, m, {alpha: b for alpha, b in zip(basis, beta)})


def multiplicity_exact(
    shape: Partition,
    n: int,
    d: int,
    m: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
    stats: Optional[Dict[str, int]] = None,
) -> int:
    """
    Exact multiplicity: the rank of the evaluations on the lattice {beta : |beta| = n}
    of monomial coefficient vectors, which is unisolvent for degree-n forms.
    """
    _check_multiplicity_args(shape, n, d, m)
    tableaux = enumerate_ssyt(shape, n, d, cap=cap)
    num_coefficients = comb(m + d - 1, d)
    lattice = list(compositions(n, num_coefficients)) if tableaux else []
    if stats is not None:
        stats["tableaux"] = len(tableaux)
        stats["lattice_points"] = len(lattice)
    if not tableaux:
        return 0
    points = [_lattice_point(beta, d, m) for beta in lattice]
    matrix = [[eval_dense(t, p) for p in points] for t in tableaux]
    rank = exact_rank(matrix)
    logger.info("exact multiplicity of %s: %d (%d lattice points)", shape.parts, rank, len(lattice))
    return rank


def hwv_polynomial(t: Tableau, m: int) -> DensePoly:
    """
    The evaluation map p -> f(p) as a degree-n form in the monomial coefficients of p,
    variables ordered as monomial_basis(d, m).
    """
    num_coefficients = comb(m + t.d - 1, t.d)
    lattice = list(compositions(t.n, num_coefficients))
    values = [eval_dense(t, _lattice_point(beta, t.d, m)) for beta in lattice]
    exponents = list(compositions(t.n, num_coefficients))
    system = [[prod(b ** e for b, e in zip(beta, gamma)) for gamma in exponents] for beta in lattice]
    solution = solve(system, values)
    return DensePoly.from_terms(t.n, num_coefficients, dict(zip(exponents, solution)))
