import pytest
import random
import sys
from fractions import Fraction
from itertools import product
from math import comb

from pydantic import ValidationError

from scripts.hwv.abp import (
    AbpEdge,
    NcAbp,
    abp_chow,
    abp_eval_dense,
    abp_from_waring,
    abp_layer_ranks,
    abp_minimize,
    ncw,
    residual_basis,
)
from scripts.hwv.linalg import exact_rank
from scripts.hwv.polynomial import DensePoly, LinearForm, WaringPoint, contract, flattening, monomial_basis, waring_expand
from scripts.hwv.utils import PreconditionError
from scripts.tests.hwv.random_instances import random_dense_poly, random_waring_point

X = LinearForm(coefficients=(1, 0))
Y = LinearForm(coefficients=(0, 1))
X2Y = DensePoly.from_terms(3, 2, {(2, 1): 1})
P_SQ = WaringPoint.from_forms(2, [(1, 0), (0, 1)])
P_XY = WaringPoint.from_forms(2, [(1, 1), (1, -1)], [Fraction(1, 4), Fraction(-1, 4)])


def _edge(u, v, label):
    return {"from": u, "to": v, "label": [str(c) for c in label]}


# Width-2 program for x^2 y: vertex 1 of each middle layer is the upper one.
X2Y_PROGRAM = {
    "d": 3,
    "m": 2,
    "layers": [1, 2, 2, 1],
    "edges": [
        [_edge(1, 1, (1, 0)), _edge(1, 2, (0, 1))],
        [_edge(1, 1, (0, Fraction(1, 2))), _edge(1, 2, (1, 0)), _edge(2, 1, (Fraction(1, 2), 0))],
        [_edge(1, 1, (Fraction(2, 3), 0)), _edge(2, 1, (0, Fraction(1, 3)))],
    ],
}


def test_width_two_program_computes_x2y():
    abp = NcAbp.model_validate(X2Y_PROGRAM)
    assert abp.width == 2
    assert abp_eval_dense(abp).terms == {(2, 1): 1}


def test_wire_format_uses_from_and_to():
    abp = NcAbp.model_validate(X2Y_PROGRAM)
    dumped = abp.model_dump(by_alias=True)
    assert dumped["edges"][0][1] == {"from": 1, "to": 2, "label": ["0", "1"]}
    assert NcAbp.model_validate(dumped).model_dump(by_alias=True) == dumped


@pytest.mark.parametrize(
    ("layers", "edges"),
    [
        ([2, 1], [[]]),
        ([1, 1, 1], [[]]),
        ([1, 1], [[_edge(1, 2, (1, 0))]]),
        ([1, 1], [[_edge(1, 1, (1, 0)), _edge(1, 1, (0, 1))]]),
        ([1, 1], [[_edge(1, 1, (1, 0, 0))]]),
    ],
)
def test_malformed_programs(layers, edges):
    with pytest.raises(ValidationError):
        NcAbp.model_validate({"d": 1, "m": 2, "layers": layers, "edges": edges})


def test_zero_labels_are_not_edges():
    abp = NcAbp(
        d=1, m=2, layers=[1, 1],
        edges=[[AbpEdge(source=1, target=1, label=LinearForm(coefficients=(0, 0)))]],
    )
    assert abp.out_edges(0, 1) == []
    assert abp.label(0, 1, 1) is None
    assert abp_eval_dense(abp).is_zero()


def test_from_waring_disjoint_paths():
    abp = abp_from_waring(P_SQ)
    assert abp.layers == [1, 2, 1]
    assert [(e.source, e.target) for e in abp.edges[0]] == [(1, 1), (1, 2)]
    assert abp_eval_dense(abp).terms == {(2, 0): 1, (0, 2): 1}
    assert abp_eval_dense(abp_from_waring(P_XY)).terms == {(1, 1): 1}


def test_from_waring_empty_point():
    abp = abp_from_waring(WaringPoint(d=3, m=2, terms=[]))
    assert abp.layers == [1, 1, 1, 1]
    assert abp_eval_dense(abp).is_zero()


def test_from_waring_degree_one_sums_the_forms():
    abp = abp_from_waring(WaringPoint.from_forms(1, [(1, 2), (3, -1)], [2, 1]))
    assert abp.layers == [1, 1]
    assert abp_eval_dense(abp).terms == {(1, 0): 5, (0, 1): 3}


def test_from_waring_matches_expansion():
    rng = random.Random(11)
    for _ in range(30):
        d, m, rank = rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3)
        p = random_waring_point(rng, d, m, rank)
        assert abp_eval_dense(abp_from_waring(p)).terms == waring_expand(p).terms


@pytest.mark.parametrize(
    ("forms", "layers", "expected"),
    [
        ([X, Y], [1, 2, 1], {(1, 1): 1}),
        ([X, Y, X], [1, 3, 3, 1], {(2, 1): 1}),
        ([X], [1, 1], {(1, 0): 1}),
        ([LinearForm(coefficients=(1, 1)), LinearForm(coefficients=(1, -1))], [1, 2, 1], {(2, 0): 1, (0, 2): -1}),
    ],
)
def test_chow_program(forms, layers, expected):
    abp = abp_chow(forms)
    assert abp.layers == layers
    assert abp_eval_dense(abp).terms == expected


def test_chow_needs_forms():
    with pytest.raises(PreconditionError):
        abp_chow([])
    with pytest.raises(PreconditionError):
        abp_chow([X, LinearForm(coefficients=(1, 0, 0))])


@pytest.mark.parametrize(
    ("poly", "layers"),
    [
        (X2Y, [1, 2, 2, 1]),
        (DensePoly.from_terms(4, 2, {(4, 0): 1}), [1, 1, 1, 1, 1]),
        (
            DensePoly.from_terms(3, 4, {(3, 0, 0, 0): 1, (1, 1, 1, 0): 3, (0, 1, 1, 1): 3, (0, 0, 0, 3): 1}),
            [1, 4, 4, 1],
        ),
    ],
)
def test_minimize_layer_sizes(poly, layers):
    abp = abp_minimize(poly)
    assert abp.layers == layers
    assert abp_layer_ranks(poly) == layers
    assert abp_eval_dense(abp).terms == poly.terms


def chow_product(rng, d, m):
    forms = [LinearForm(coefficients=tuple(rng.randint(-3, 3) for _ in range(m))) for _ in range(d)]
    return forms, abp_eval_dense(abp_chow(forms))


def test_minimize_round_trips_random_polynomials():
    rng = random.Random(5)
    for i in range(60):
        d, m = rng.randint(1, 5), rng.randint(1, 4)
        if i % 2:
            p = random_dense_poly(rng, d, m, density=rng.choice([0.2, 0.5, 0.9]))
        else:
            _, p = chow_product(rng, d, m)
            if p.is_zero():
                continue
        abp = abp_minimize(p)
        assert abp.layers == abp_layer_ranks(p)
        assert abp_eval_dense(abp).terms == p.terms


def test_minimize_never_wider_than_waring_rank():
    rng = random.Random(3)
    checked = 0
    for _ in range(120):
        d, m, rank = rng.randint(1, 5), rng.randint(1, 4), rng.randint(1, 5)
        point = random_waring_point(rng, d, m, rank)
        p = waring_expand(point)
        if p.is_zero():
            continue
        assert ncw(p) <= abp_from_waring(point).width <= rank
        assert abp_minimize(p).width == ncw(p)
        checked += 1
    assert checked >= 100


@pytest.mark.parametrize("d", range(2, 9))
def test_ncw_of_x_to_the_d_minus_one_times_y(d):
    p = DensePoly.from_terms(d, 2, {(d - 1, 1): 1})
    assert ncw(p) == 2
    assert abp_layer_ranks(p) == [1] + [2] * (d - 1) + [1]
    assert abp_minimize(p).layers == abp_layer_ranks(p)


@pytest.mark.parametrize(("d", "width"), [(2, 2), (3, 3), (4, 6), (5, 10)])
def test_ncw_of_the_elementary_product(d, width):
    # x_1 x_2 ... x_d keeps every half-size subset of the variables as a state
    p = DensePoly.from_terms(d, d, {(1,) * d: 1})
    assert ncw(p) == width


def test_zero_polynomial_has_no_width():
    with pytest.raises(PreconditionError):
        ncw(DensePoly.zero(3, 2))
    with pytest.raises(PreconditionError):
        abp_minimize(DensePoly.zero(3, 2))


def test_residual_basis_spans_every_contraction():
    rng = random.Random(31)
    for _ in range(15):
        d, m = rng.randint(1, 4), rng.randint(1, 3)
        p = random_dense_poly(rng, d, m)
        for k in range(d + 1):
            basis, pivots = residual_basis(p, k)
            assert len(basis) == len(pivots) == flattening(p, k).rank()
            monomials = monomial_basis(d - k, m)
            rows = [[q.coefficient(beta) for beta in monomials] for q in basis]
            for word in product(range(1, m + 1), repeat=k):
                residual = contract(word, p)
                assert exact_rank(rows + [[residual.coefficient(beta) for beta in monomials]]) == len(basis), word


@pytest.mark.parametrize("d", range(1, 7))
def test_chow_program_computes_the_product(d):
    rng = random.Random(32 + d)
    for _ in range(3):
        m = rng.randint(1, 3)
        forms, computed = chow_product(rng, d, m)
        expected = DensePoly.from_terms(0, m, {(0,) * m: 1})
        for form in forms:
            expected = expected * DensePoly.from_terms(
                1, m, {tuple(int(i == j) for i in range(m)): c for j, c in enumerate(form.coefficients)}
            )
        abp = abp_chow(forms)
        assert abp.layers == [comb(d, k) for k in range(d + 1)]
        assert computed.terms == expected.terms
        if not expected.is_zero():
            assert ncw(expected) <= abp.width


if __name__ == "__main__":
    sys.exit(pytest.main(["-v", __file__]))
