import pytest
import random
import sys
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from scripts.hwv.evaluation import eval_naive
from scripts.hwv.hwv import (
    gl_transform_point,
    hwv_polynomial,
    hwv_unipotent_check,
    hwv_weight_check,
    multiplicity,
    multiplicity_exact,
)
from scripts.hwv.polynomial import WaringPoint, waring_expand
from scripts.hwv.tableau import Content, Partition, Tableau
from scripts.hwv.utils import CapExceededError, PreconditionError
from scripts.tests.hwv.random_instances import random_tableau, random_waring_point

DISC = Tableau(rows=((1, 1), (2, 2)), content=Content(n=2, d=2))
P_SQ = WaringPoint.from_forms(2, [(1, 0), (0, 1)])


def test_gl_transform_identity_and_diagonal():
    assert gl_transform_point([[1, 0], [0, 1]], P_SQ) == P_SQ
    scaled = gl_transform_point([[2, 0], [0, 1]], P_SQ)
    assert [t.form.coefficients for t in scaled.terms] == [(2, 0), (0, 1)]
    with pytest.raises(PreconditionError):
        gl_transform_point([[1]], P_SQ)


def test_gl_transform_is_a_linear_substitution():
    rng = random.Random(1)
    for _ in range(10):
        p = random_waring_point(rng, 3, 3, 2)
        g = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        assert waring_expand(gl_transform_point(g, p)).terms == waring_expand(p).substitute(g).terms


def test_discriminant_weight():
    assert eval_naive(DISC, P_SQ) == 2
    assert hwv_weight_check(DISC, P_SQ, [2, 1])
    assert eval_naive(DISC, gl_transform_point([[2, 0], [0, 1]], P_SQ)) == 8
    assert hwv_weight_check(DISC, P_SQ, [1, 1])


def test_discriminant_unipotent_invariance():
    assert hwv_unipotent_check(DISC, P_SQ, [[1, 1], [0, 1]])
    assert hwv_unipotent_check(DISC, P_SQ, [[1, 0], [0, 1]])
    with pytest.raises(PreconditionError):
        hwv_unipotent_check(DISC, P_SQ, [[1, 0], [1, 1]])
    with pytest.raises(PreconditionError):
        hwv_weight_check(DISC, P_SQ, [1, 0])


def test_discriminant_is_proportional_to_b2_minus_4ac():
    rng = random.Random(6)
    for _ in range(20):
        a, b, c = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        # a x^2 + b xy + c y^2 as a Waring point: a x^2 + c y^2 + (b/4)((x+y)^2 - (x-y)^2)
        p = WaringPoint.from_forms(2, [(1, 0), (0, 1), (1, 1), (1, -1)], [a, c, b / 4, -b / 4])
        assert eval_naive(DISC, p) == Fraction(-1, 2) * (b * b - 4 * a * c)


def test_hwv_polynomial_of_the_discriminant():
    assert hwv_polynomial(DISC, 2).terms == {(1, 0, 1): 2, (0, 2, 0): Fraction(-1, 2)}


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_defining_properties_on_random_instances(seed):
    rng = random.Random(seed)
    n, d, m = rng.randint(1, 3), rng.randint(1, 3), rng.randint(2, 3)
    t = random_tableau(rng, n, d, m)
    p = random_waring_point(rng, d, m, rng.randint(1, 3))
    alpha = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2)) for _ in range(m)]
    u = [[1 if i == j else (rng.randint(-3, 3) if i < j else 0) for j in range(m)] for i in range(m)]
    assert hwv_weight_check(t, p, alpha)
    assert hwv_unipotent_check(t, p, u)


@pytest.mark.parametrize(
    ("shape", "expected"),
    [((2, 2), 1), ((3, 1), 0), ((4,), 1)],
)
def test_multiplicity_pins(shape, expected):
    partition = Partition(parts=shape)
    assert multiplicity(partition, 2, 2, 2, seed=3) == expected
    assert multiplicity_exact(partition, 2, 2, 2) == expected


def test_multiplicity_of_cubics_in_two_variables():
    # Sym^2 Sym^3 C^2 = S(6) + S(4,2)
    assert multiplicity_exact(Partition(parts=(4, 2)), 2, 3, 2) == 1
    assert multiplicity_exact(Partition(parts=(5, 1)), 2, 3, 2) == 0
    assert multiplicity(Partition(parts=(3, 3)), 2, 3, 2) == 0


def test_multiplicity_preconditions():
    with pytest.raises(PreconditionError):
        multiplicity(Partition(parts=(3,)), 2, 2, 2)
    with pytest.raises(PreconditionError):
        multiplicity(Partition(parts=(1, 1, 1, 1)), 2, 2, 2)
    with pytest.raises(CapExceededError):
        multiplicity(Partition(parts=(4, 2)), 3, 2, 2, cap=1)


def test_multiplicity_reports_what_it_used():
    stats = {}
    assert multiplicity(Partition(parts=(2, 2)), 2, 2, 2, stats=stats) == 1
    assert stats == {"tableaux": 1, "samples": 6}
    multiplicity(Partition(parts=(2, 2)), 2, 2, 2, samples=9, stats=stats)
    assert stats["samples"] == 9
    stats = {}
    assert multiplicity_exact(Partition(parts=(2, 2)), 2, 2, 2, stats=stats) == 1
    # three coefficients of a binary quadric, degree-2 lattice points
    assert stats == {"tableaux": 1, "lattice_points": 6}
    stats = {}
    assert multiplicity(Partition(parts=(2, 1, 1)), 2, 2, 3, stats=stats) == 0
    assert stats == {"tableaux": 0, "samples": 0}


if __name__ == "__main__":
    sys.exit(pytest.main(["-v", __file__]))
