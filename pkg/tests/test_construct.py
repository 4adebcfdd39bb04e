"""The construction pipeline: conjugation, base partition, counts."""

import random
from fractions import Fraction

import pytest

from markov_torus.construct import (
    BaseConstruction,
    ConjugationResult,
    InvariantError,
    SignCase,
    build_base_partition,
    build_markov_construction,
    composition_graph,
    conjugate_nonnegative,
    count_intersections,
)
from markov_torus.exact import QuadReal
from markov_torus.partition import transition_graph
from markov_torus.sft import count_blocks, count_periodic
from markov_torus.torus import (
    Mat2Z,
    NotHyperbolicError,
    apply_auto,
    hyperbolic_check,
)

from oracles import brute_conjugator
from test_torus import random_hyperbolic

FIB = Mat2Z(1, 1, 1, 0)
E = Mat2Z.swap()

SUITE = [
    FIB,
    Mat2Z(2, 1, 1, 1),
    Mat2Z(1, 2, 1, 1),
    Mat2Z(2, 3, 1, 2),
    Mat2Z(3, 2, 1, 1),
    Mat2Z(1, 1, 1, 2),
]
SUITE = SUITE + [-m for m in SUITE]


def test_nonnegative_input_conjugates_trivially():
    res = conjugate_nonnegative(FIB)
    assert res.conjugator == Mat2Z.identity()
    assert res.model == FIB
    assert res.epsilon == 1
    assert not res.swapped


def test_negated_input_flips_epsilon():
    res = conjugate_nonnegative(-FIB)
    assert res.conjugator == Mat2Z.identity()
    assert res.model == FIB
    assert res.epsilon == -1


def test_slope_orientation_composes_an_axis_swap():
    res = conjugate_nonnegative(Mat2Z(1, 2, 1, 1))
    assert res.swapped
    assert res.conjugator == E
    assert res.model == Mat2Z(1, 1, 2, 1)
    res2 = conjugate_nonnegative(Mat2Z(1, 1, 1, 2))
    assert res2.model == Mat2Z(2, 1, 1, 1)


@pytest.mark.parametrize(
    "matrix", [Mat2Z(3, -1, -2, 1), Mat2Z(0, 1, 1, -1), Mat2Z(-4, 9, 1, -2)]
)
def test_mixed_sign_input_needs_a_real_conjugation(matrix):
    res = conjugate_nonnegative(matrix)
    res.verify()
    assert res.conjugator not in (Mat2Z.identity(), E)
    assert res.model.det() == matrix.det()
    assert res.epsilon * res.model.trace() == matrix.trace()
    # independent exhaustive search agrees that a solution exists and that
    # spectra match (conjugation preserves trace and determinant)
    oracle = brute_conjugator(matrix.rows(), bound=5)
    assert oracle is not None
    _, oracle_model, oracle_eps = oracle
    assert oracle_eps * (oracle_model[0][0] + oracle_model[1][1]) == matrix.trace()
    assert all(entry >= 0 for row in oracle_model for entry in row)


def test_epsilon_is_the_sign_of_the_expanding_eigenvalue():
    for matrix in SUITE + [Mat2Z(3, -1, -2, 1), Mat2Z(0, 1, 1, -1)]:
        res = conjugate_nonnegative(matrix)
        assert res.epsilon == hyperbolic_check(matrix).lam.sign()


def test_conjugation_intertwines_the_torus_maps():
    rng = random.Random(7)
    for matrix in SUITE + [Mat2Z(3, -1, -2, 1)]:
        res = conjugate_nonnegative(matrix)
        acting = res.model if res.epsilon == 1 else -res.model
        inv = res.conjugator.inverse()
        for _ in range(8):
            point = (Fraction(rng.randrange(97), 97), Fraction(rng.randrange(97), 97))
            left = apply_auto(inv, apply_auto(matrix, point))
            right = apply_auto(acting, apply_auto(inv, point))
            assert left == right


SIGN_CASES = {
    Mat2Z(2, 1, 1, 1): SignCase.PLUS_PLUS,     # det +1, expanding > 0
    FIB: SignCase.PLUS_MINUS,                  # det -1, expanding > 0
    -FIB: SignCase.MINUS_PLUS,                 # det -1, expanding < 0
    -Mat2Z(2, 1, 1, 1): SignCase.MINUS_MINUS,  # det +1, expanding < 0
}


@pytest.mark.parametrize("matrix,expected", SIGN_CASES.items(), ids=str)
def test_sign_cases(matrix, expected):
    mc = build_markov_construction(matrix)
    assert mc.base.sign_case is expected
    assert mc.base.sign_case.translated == (expected.value[1] < 0)


def test_slide_is_zero_without_contracting_reflection():
    mc = build_markov_construction(Mat2Z(2, 1, 1, 1))
    assert mc.base.rho == 0
    a = mc.base.corner("a")
    o = mc.base.corner("o")
    assert (a.u, a.w, a.x, a.y) == (o.u, o.w, o.x, o.y)


def test_slide_boundary_case_is_exact():
    # the slide of the golden-mean construction lands exactly on the first
    # contracting lattice level: the inclusive comparison must accept it
    mc = build_markov_construction(FIB)
    assert mc.base.rho == mc.base.partition.frame.w10
    b = mc.base.corner("b")
    assert (b.u, b.w) == (QuadReal(0), QuadReal(0))  # b slides onto the origin


def test_slide_value_is_rational_for_the_squared_golden_map():
    mc = build_markov_construction(-Mat2Z(2, 1, 1, 1))
    assert mc.base.rho == QuadReal(Fraction(1, 5))


def test_slide_fixes_contracting_boundary():
    for matrix in (FIB, -Mat2Z(2, 1, 1, 1), Mat2Z(1, 2, 1, 1), -Mat2Z(2, 3, 1, 2)):
        mc = build_markov_construction(matrix)
        base = mc.base
        if not base.sign_case.translated:
            continue
        d_bar = base.corner("d_bar")
        a = base.corner("a")
        image = mc.acting.act((d_bar.x, d_bar.y))
        assert image == (a.x, a.y)


def test_corner_points_are_consistent():
    for matrix in SUITE:
        base = build_markov_construction(matrix).base
        frame = base.partition.frame
        names = [c.name for c in base.corners]
        assert len(names) == 17 and len(set(names)) == 17
        for c in base.corners:
            assert (c.x, c.y) == frame.to_plane(c.u, c.w)
        assert (base.corner("o'''").x, base.corner("o'''").y) == (QuadReal(0), QuadReal(1))
        assert base.corner("c_bar").w == base.corner("b'").w == base.rho
        # cell I is the box a c d' b', cell II is c' d' b'' a''
        box1, box2 = base.partition.boxes
        assert (base.corner("a").u, base.corner("a").w) == (box1.u_lo, box1.w_hi)
        assert (base.corner("d'").u, base.corner("d'").w) == (box1.u_hi, box1.w_lo)
        assert (base.corner("c'").u, base.corner("c'").w) == (box2.u_lo, box2.w_hi)
        assert (base.corner("b''").u, base.corner("b''").w) == (box2.u_hi, box2.w_lo)


@pytest.mark.parametrize("matrix", SUITE, ids=str)
def test_transition_counts_match_model(matrix):
    mc = build_markov_construction(matrix)
    assert mc.graph.matrix == mc.model.rows()
    assert count_intersections(mc.base).matrix == mc.model.rows()
    assert mc.refined.n == sum(sum(row) for row in mc.model.rows())
    assert mc.refined_graph.is_zero_one()
    assert mc.refined_graph.matrix == composition_graph(mc.cells).matrix
    assert transition_graph(mc.refined).matrix == mc.refined_graph.matrix


@pytest.mark.parametrize("matrix", SUITE, ids=str)
def test_refined_graph_counts_blocks_like_the_model(matrix):
    mc = build_markov_construction(matrix)
    p = mc.model
    for n in range(1, 6):
        power = (p ** n).rows()
        assert count_blocks(mc.refined_graph, n) == sum(sum(r) for r in power)
        assert count_periodic(mc.refined_graph, n) == power[0][0] + power[1][1]


def test_full_pipeline_on_random_matrices():
    rng = random.Random(20260814)
    for _ in range(25):
        matrix = random_hyperbolic(rng, max_entry=20)
        mc = build_markov_construction(matrix)
        mc.conjugation.verify()
        assert mc.graph.matrix == mc.model.rows()
        assert mc.refined.n == sum(sum(row) for row in mc.model.rows())


def test_rejects_non_hyperbolic_input():
    for matrix in (Mat2Z(1, 1, 0, 1), Mat2Z(0, -1, 1, 0), Mat2Z(1, 0, 0, 1)):
        with pytest.raises(NotHyperbolicError):
            build_markov_construction(matrix)


def test_base_partition_input_validation():
    with pytest.raises(ValueError):
        build_base_partition(Mat2Z(3, -1, -2, 1), 1)  # negative entry
    with pytest.raises(ValueError):
        build_base_partition(FIB, 2)  # bad sign
    with pytest.raises(ValueError):
        build_base_partition(Mat2Z(1, 2, 1, 1), 1)  # slope not in (0, 1)
