"""Compatibility checking, forward evaluation, and the path oracle."""

import itertools

import pytest

from latticerec.autonomous import (
    AutonomousSystem,
    check_compatibility,
    describe_route,
    eval_box,
    eval_forward,
    path_independence_check,
    walk_path,
)
from latticerec.errors import (
    CapExceededError,
    IncomparableError,
    IncompatibleSystemError,
)
from latticerec.lattice import MonotonePath, MultiIndex
from latticerec.limits import Limits
from latticerec.matrices import Matrix
from latticerec.monoids import AdditiveSelfAction, IntegerAdditive
from latticerec.statespace import (
    AffineInt,
    FiniteEnumerated,
    IntegerLine,
    MatrixLinear,
    MonoidTranslate,
    RationalVector,
    StepMap,
    Table,
    apply,
)


def mi(*coords):
    return MultiIndex(coords)


def additive_system(*amounts):
    line = IntegerLine()
    return AutonomousSystem(
        tuple(
            StepMap(line, MonoidTranslate(IntegerAdditive(), a, AdditiveSelfAction()))
            for a in amounts
        )
    )


def table_system(space_size, *images):
    space = FiniteEnumerated(space_size)
    return AutonomousSystem(tuple(StepMap(space, Table(im)) for im in images))


INCOMPATIBLE_SYS = AutonomousSystem(
    (StepMap(IntegerLine(), AffineInt(1, 1)), StepMap(IntegerLine(), AffineInt(2, 0)))
)


class TestCheckCompatibility:
    def test_identity_pair(self):
        sys_ = table_system(2, (0, 1), (0, 1))
        report = check_compatibility(sys_)
        assert report.status == "compatible"
        assert report.checked_pairs == 1
        assert report.witnesses == ()

    def test_increment_vs_doubling(self):
        report = check_compatibility(INCOMPATIBLE_SYS)
        assert report.status == "incompatible"
        alpha, beta, x = report.witnesses[0]
        assert (alpha, beta, x) == (1, 2, 0)
        g1, g2 = INCOMPATIBLE_SYS.maps
        assert apply(g1, apply(g2, x)) == 1
        assert apply(g2, apply(g1, x)) == 2

    def test_commuting_matrices(self):
        a = Matrix([[1, 1], [0, 1]])
        b = Matrix([[1, 2], [0, 1]])
        space = RationalVector(2)
        sys_ = AutonomousSystem(
            (StepMap(space, MatrixLinear(a)), StepMap(space, MatrixLinear(b)))
        )
        assert check_compatibility(sys_).status == "compatible"
        assert a @ b == b @ a == Matrix([[1, 3], [0, 1]])

    def test_every_witness_reevaluates_to_a_violation(self):
        tables = list(itertools.product(range(3), repeat=3))
        for f, g in itertools.product(tables[:12], tables[:12]):
            sys_ = table_system(3, f, g)
            report = check_compatibility(sys_)
            for alpha, beta, x in report.witnesses:
                ga, gb = sys_.maps[alpha - 1], sys_.maps[beta - 1]
                assert apply(ga, apply(gb, x)) != apply(gb, apply(ga, x))


class TestEvalForward:
    def test_start_point(self):
        sys_ = additive_system(2, 3)
        assert eval_forward(sys_, mi(1, 1), 42, mi(1, 1)) == 42

    def test_additive_against_path_walk(self):
        sys_ = additive_system(2, 3)
        value = eval_forward(sys_, mi(0, 0), 1, mi(2, 3))
        walk = walk_path(sys_, 1, MonotonePath(mi(0, 0), (1, 1, 2, 2, 2)))
        assert value == walk.final_state == 14

    def test_three_cycle(self):
        sys_ = table_system(3, (1, 2, 0), (1, 2, 0))
        assert eval_forward(sys_, mi(0, 0), 0, mi(1, 2)) == 0

    def test_refuses_incompatible_without_override(self):
        with pytest.raises(IncompatibleSystemError):
            eval_forward(INCOMPATIBLE_SYS, mi(0, 0), 0, mi(1, 1))
        assert eval_forward(INCOMPATIBLE_SYS, mi(0, 0), 0, mi(1, 1), unsafe=True) == 1

    def test_target_below_start(self):
        with pytest.raises(IncomparableError):
            eval_forward(additive_system(1, 1), mi(0, 0), 0, mi(-1, 0))

    def test_semigroup_property(self):
        sys_ = additive_system(2, 3)
        t0, s, t = mi(0, 0), mi(1, 2), mi(3, 4)
        via_s = eval_forward(sys_, s, eval_forward(sys_, t0, 5, s), t)
        assert via_s == eval_forward(sys_, t0, 5, t)

    def test_exponent_cap(self):
        sys_ = AutonomousSystem((StepMap(IntegerLine(), AffineInt(2, 0)),))
        with pytest.raises(CapExceededError):
            eval_forward(sys_, mi(0), 1, mi(5), limits=Limits(exponent_cap=4))

    def test_route_description(self):
        sys_ = AutonomousSystem(
            (
                StepMap(IntegerLine(), AffineInt(2, 0)),
                StepMap(IntegerLine(), AffineInt(4, 0)),
            )
        )
        route = describe_route(sys_, mi(0, 0), mi(2, 5))
        assert route == [
            {"axis": 1, "exponent": 2, "mode": "binary"},
            {"axis": 2, "exponent": 5, "mode": "binary"},
        ]


class TestWalkPath:
    def test_empty_path(self):
        traj = walk_path(additive_system(2, 3), 7, MonotonePath(mi(0, 0), ()))
        assert traj.points == ((mi(0, 0), 7),)

    def test_additive_both_orders(self):
        sys_ = additive_system(2, 3)
        one = walk_path(sys_, 0, MonotonePath(mi(0, 0), (1, 2)))
        other = walk_path(sys_, 0, MonotonePath(mi(0, 0), (2, 1)))
        assert [s for _, s in one.points] == [0, 2, 5]
        assert one.final_state == other.final_state == 5

    def test_incompatible_system_still_walkable(self):
        traj = walk_path(INCOMPATIBLE_SYS, 0, MonotonePath(mi(0, 0), (1, 2)))
        assert traj.final_state == 2


class TestPathIndependence:
    def test_compatible_box(self):
        result = path_independence_check(additive_system(2, 3), mi(0, 0), 1, mi(2, 2))
        assert result.independent
        assert result.path_count == 6
        assert result.endpoints[0][0] == result.closed_form == 11

    def test_incompatible_two_endpoints(self):
        result = path_independence_check(INCOMPATIBLE_SYS, mi(0, 0), 0, mi(1, 1))
        assert not result.independent
        assert dict(result.endpoints) == {2: (1, 2), 1: (2, 1)}

    def test_degenerate_box(self):
        result = path_independence_check(INCOMPATIBLE_SYS, mi(3, 3), 5, mi(3, 3))
        assert result.independent and result.path_count == 1

    def test_witness_paths_disagree(self):
        report = check_compatibility(INCOMPATIBLE_SYS)
        alpha, beta, x = report.witnesses[0]
        sys_ = INCOMPATIBLE_SYS
        forward = walk_path(sys_, x, MonotonePath(mi(0, 0), (alpha, beta))).final_state
        backward = walk_path(sys_, x, MonotonePath(mi(0, 0), (beta, alpha))).final_state
        assert forward != backward


class TestEvalBox:
    def test_single_cell(self):
        grid = eval_box(additive_system(2, 3), mi(0, 0), 1, mi(0, 0))
        assert grid.cells == ((mi(0, 0), 1),)

    def test_additive_grid(self):
        grid = eval_box(additive_system(2, 3), mi(0, 0), 1, mi(1, 1))
        assert dict(grid.cells) == {
            mi(0, 0): 1,
            mi(1, 0): 3,
            mi(0, 1): 4,
            mi(1, 1): 6,
        }

    def test_matrix_column(self):
        a = Matrix([[1, 1], [0, 1]])
        b = Matrix([[1, 2], [0, 1]])
        space = RationalVector(2)
        sys_ = AutonomousSystem(
            (StepMap(space, MatrixLinear(a)), StepMap(space, MatrixLinear(b)))
        )
        x0 = (0, 1)
        grid = eval_box(sys_, mi(0, 0), x0, mi(2, 0))
        expected = [x0, a.apply(x0), a.apply(a.apply(x0))]
        assert [s for _, s in grid.cells] == expected

    def test_volume_cap(self):
        with pytest.raises(CapExceededError):
            eval_box(
                additive_system(1, 1), mi(0, 0), 0, mi(9, 9), limits=Limits(volume_cap=10)
            )

    def test_grid_agrees_with_closed_form_everywhere(self):
        sys_ = table_system(4, (1, 2, 3, 0), (2, 3, 0, 1))
        grid = eval_box(sys_, mi(0, 0), 1, mi(3, 3))
        for idx, state in grid.cells:
            assert state == eval_forward(sys_, mi(0, 0), 1, idx)


class TestExhaustiveSmallModels:
    def test_commuting_tables_are_path_independent(self):
        # every commuting pair on up to three states, boxes with few steps
        t0 = mi(0, 0)
        for n in range(1, 4):
            tables = list(itertools.product(range(n), repeat=n))
            for f, g in itertools.combinations_with_replacement(tables, 2):
                if any(f[g[x]] != g[f[x]] for x in range(n)):
                    continue
                sys_ = table_system(n, f, g)
                for corner in [mi(2, 1), mi(1, 2)]:
                    for x0 in range(n):
                        result = path_independence_check(sys_, t0, x0, corner)
                        assert result.independent
