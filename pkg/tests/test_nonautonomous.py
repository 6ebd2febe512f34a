"""Timed systems: the lift, timed compatibility, and timed evaluation."""

import random

import pytest

from latticerec.autonomous import AutonomousSystem, eval_forward, walk_path
from latticerec.errors import LatticeRecError, TimeWindowError
from latticerec.lattice import MonotonePath, MultiIndex, box_points, enumerate_monotone_paths
from latticerec.nonautonomous import (
    AffineIntTimed,
    AugmentedState,
    AxisPolynomial,
    NonAutonomousSystem,
    TablePerTime,
    TimedStepMap,
    apply_timed,
    check_compatibility_timed,
    eval_timed,
    lift,
    unlift_solution,
    verify_time_component,
)
from latticerec.statespace import (
    FiniteEnumerated,
    IntegerLine,
    StepMap,
    apply,
)

LINE = IntegerLine()


def mi(*coords):
    return MultiIndex(coords)


def const_poly(c, m):
    return AxisPolynomial.constant(c, m)


def axis_poly(m, axis, coeffs, const=0):
    per_axis = [[] for _ in range(m)]
    per_axis[axis - 1] = list(coeffs)
    return AxisPolynomial(const, per_axis)


def own_axis_translation_system(m):
    """F_alpha(t, x) = x + t^alpha: a commuting time-dependent family."""
    maps = [
        TimedStepMap(LINE, AffineIntTimed(const_poly(1, m), axis_poly(m, alpha, [1])))
        for alpha in range(1, m + 1)
    ]
    return NonAutonomousSystem(mi(*([0] * m)), maps)


class TestPolynomials:
    def test_evaluation(self):
        # 2 + 3 t^1 + (t^2)^2
        poly = AxisPolynomial(2, ((3,), (0, 1)))
        assert poly.eval_at(mi(1, 2)) == 2 + 3 + 4
        assert poly.eval_at(mi(0, -3)) == 2 + 9

    def test_degree(self):
        poly = AxisPolynomial(0, ((1, 5), ()))
        assert poly.degree(1) == 2 and poly.degree(2) == 0


class TestApplyTimed:
    def test_identity_rule(self):
        step = TimedStepMap(LINE, AffineIntTimed(const_poly(1, 1), const_poly(0, 1)))
        assert apply_timed(step, mi(9), 5) == 5

    def test_time_dependent_offset(self):
        step = TimedStepMap(LINE, AffineIntTimed(const_poly(1, 1), axis_poly(1, 1, [1])))
        assert apply_timed(step, mi(3), 5) == 8

    def test_windowed_table(self):
        space = FiniteEnumerated(2)
        rule = TablePerTime(((mi(0), (1, 0)), (mi(1), (0, 1))))
        step = TimedStepMap(space, rule)
        assert apply_timed(step, mi(0), 0) == 1
        assert apply_timed(step, mi(1), 0) == 0
        with pytest.raises(TimeWindowError):
            apply_timed(step, mi(2), 0)


class TestLift:
    def test_identity_map_only_moves_the_clock(self):
        sys_ = NonAutonomousSystem(
            mi(0, 0),
            [
                TimedStepMap(LINE, AffineIntTimed(const_poly(1, 2), const_poly(0, 2)))
                for _ in range(2)
            ],
        )
        lifted = lift(sys_)
        y = AugmentedState(mi(2, 5), 7)
        out = apply(lifted.maps[0], y)
        assert out == AugmentedState(mi(3, 5), 7)

    def test_time_dependent_substitution(self):
        sys_ = own_axis_translation_system(1)
        lifted = lift(sys_)
        out = apply(lifted.maps[0], AugmentedState(mi(3), 5))
        assert out == AugmentedState(mi(4), 8)

    def test_clock_addition_commutes(self):
        sys_ = own_axis_translation_system(2)
        lifted = lift(sys_)
        y = AugmentedState(mi(1, 1), 0)
        one_two = apply(lifted.maps[1], apply(lifted.maps[0], y))
        two_one = apply(lifted.maps[0], apply(lifted.maps[1], y))
        assert one_two.time_part == two_one.time_part == mi(2, 2)


class TestTimedCompatibility:
    def test_time_independent_reduces_to_autonomous(self):
        sys_ = NonAutonomousSystem(
            mi(0, 0),
            [
                TimedStepMap(LINE, AffineIntTimed(const_poly(1, 2), const_poly(2, 2))),
                TimedStepMap(LINE, AffineIntTimed(const_poly(1, 2), const_poly(3, 2))),
            ],
        )
        report = check_compatibility_timed(sys_, (mi(0, 0), mi(2, 2)))
        assert report.status == "compatible"

    def test_own_axis_translations_commute(self):
        report = check_compatibility_timed(
            own_axis_translation_system(2), (mi(0, 0), mi(4, 4))
        )
        assert report.status == "compatible"
        assert report.decided == "symbolic"

    def test_incompatible_with_witness(self):
        # F1 = x + t^2, F2 = 2x: violated already at t = (0, 0), x = 0
        sys_ = NonAutonomousSystem(
            mi(0, 0),
            [
                TimedStepMap(LINE, AffineIntTimed(const_poly(1, 2), axis_poly(2, 2, [1]))),
                TimedStepMap(LINE, AffineIntTimed(const_poly(2, 2), const_poly(0, 2))),
            ],
        )
        report = check_compatibility_timed(sys_, (mi(0, 0), mi(3, 3)))
        assert report.status == "incompatible"
        alpha, beta, witness = report.witnesses[0]
        assert (alpha, beta) == (1, 2)
        assert witness == AugmentedState(mi(0, 0), 0)
        fa, fb = sys_.maps
        left = apply_timed(fa, witness.time_part + mi(0, 1), apply_timed(fb, witness.time_part, 0))
        right = apply_timed(fb, witness.time_part + mi(1, 0), apply_timed(fa, witness.time_part, 0))
        assert left != right

    def test_small_window_is_only_sampled(self):
        report = check_compatibility_timed(
            own_axis_translation_system(2), (mi(0, 0), mi(0, 0))
        )
        assert report.status == "sampled_compatible"

    def test_window_below_threshold(self):
        sys_ = NonAutonomousSystem(
            mi(1, 1),
            [
                TimedStepMap(LINE, AffineIntTimed(const_poly(1, 2), const_poly(0, 2)))
                for _ in range(2)
            ],
        )
        with pytest.raises(TimeWindowError):
            check_compatibility_timed(sys_, (mi(0, 0), mi(2, 2)))

    def test_constant_tables_conclusive_over_their_window(self):
        space = FiniteEnumerated(3)
        perm = (1, 2, 0)
        window_times = [t for t in box_points(mi(0, 0), mi(2, 2))]
        rule = TablePerTime(tuple((t, perm) for t in window_times))
        sys_ = NonAutonomousSystem(
            mi(0, 0), [TimedStepMap(space, rule), TimedStepMap(space, rule)]
        )
        report = check_compatibility_timed(sys_, (mi(0, 0), mi(2, 2)))
        assert report.status == "compatible"
        smaller = check_compatibility_timed(sys_, (mi(0, 0), mi(0, 0)))
        assert smaller.status == "sampled_compatible"


class TestEvalTimed:
    def test_start_point(self):
        assert eval_timed(own_axis_translation_system(2), mi(1, 1), 9, mi(1, 1)) == 9

    def test_one_dimensional_accumulation(self):
        sys_ = own_axis_translation_system(1)
        assert eval_timed(sys_, mi(0), 0, mi(4)) == 0 + 1 + 2 + 3

    def test_time_independent_matches_autonomous(self):
        from latticerec.statespace import AffineInt

        timed = NonAutonomousSystem(
            mi(0, 0),
            [
                TimedStepMap(LINE, AffineIntTimed(const_poly(2, 2), const_poly(1, 2))),
                TimedStepMap(LINE, AffineIntTimed(const_poly(2, 2), const_poly(1, 2))),
            ],
        )
        plain = AutonomousSystem(
            (StepMap(LINE, AffineInt(2, 1)), StepMap(LINE, AffineInt(2, 1)))
        )
        for t in box_points(mi(0, 0), mi(2, 2)):
            assert eval_timed(timed, mi(0, 0), 1, t) == eval_forward(
                plain, mi(0, 0), 1, t
            )

    def test_below_threshold_rejected(self):
        sys_ = own_axis_translation_system(2)
        with pytest.raises(TimeWindowError):
            eval_timed(sys_, mi(-1, 0), 0, mi(1, 1))


class TestTimeComponent:
    def test_zero_offset(self):
        sys_ = own_axis_translation_system(2)
        assert verify_time_component(sys_, mi(0, 0), mi(0, 0), [1, 2, 1])

    def test_offset_path(self):
        sys_ = own_axis_translation_system(2)
        assert verify_time_component(sys_, mi(0, 0), mi(2, 1), [1, 2, 2])

    def test_visited_clocks(self):
        # replicate the walk by hand: (2,1), (3,1), (3,2), (3,3)
        sys_ = own_axis_translation_system(2)
        lifted = lift(sys_)
        y = AugmentedState(mi(2, 1), 0)
        clocks = [y.time_part]
        for axis in (1, 2, 2):
            y = apply(lifted.maps[axis - 1], y)
            clocks.append(y.time_part)
        assert clocks == [mi(2, 1), mi(3, 1), mi(3, 2), mi(3, 3)]

    def test_any_permutation_same_final_clock(self):
        sys_ = own_axis_translation_system(2)
        for steps in [(1, 1, 2), (1, 2, 1), (2, 1, 1)]:
            assert verify_time_component(sys_, mi(0, 0), mi(1, 2), steps)


class TestUnlift:
    def test_single_point(self):
        traj = walk_path(
            lift(own_axis_translation_system(1)),
            AugmentedState(mi(0), 5),
            MonotonePath(mi(0), ()),
        )
        assert unlift_solution(traj).points == ((mi(0), 5),)

    def test_accumulation_projection(self):
        sys_ = own_axis_translation_system(1)
        lifted = lift(sys_)
        traj = walk_path(lifted, AugmentedState(mi(0), 0), MonotonePath(mi(0), (1, 1, 1, 1)))
        projected = unlift_solution(traj)
        assert [s for _, s in projected.points] == [0, 0, 1, 3, 6]

    def test_clock_mismatch_is_an_error(self):
        sys_ = own_axis_translation_system(1)
        lifted = lift(sys_)
        # start the clock off the lattice index: projection must refuse
        traj = walk_path(lifted, AugmentedState(mi(1), 0), MonotonePath(mi(0), (1,)))
        with pytest.raises(LatticeRecError):
            unlift_solution(traj)


def seeded_timed_systems(count, rng):
    """Deterministic mix of commuting timed families on the integer line."""
    systems = []
    while len(systems) < count:
        style = rng.choice(["translate", "scale", "mixed_const"])
        if style == "translate":
            maps = [
                TimedStepMap(
                    LINE,
                    AffineIntTimed(
                        const_poly(1, 2),
                        axis_poly(2, alpha, [rng.randint(-3, 3) for _ in range(rng.randint(1, 2))]),
                    ),
                )
                for alpha in (1, 2)
            ]
        elif style == "scale":
            maps = [
                TimedStepMap(
                    LINE,
                    AffineIntTimed(
                        axis_poly(2, alpha, [rng.randint(1, 2)], const=rng.randint(1, 2)),
                        const_poly(0, 2),
                    ),
                )
                for alpha in (1, 2)
            ]
        else:
            b = rng.randint(-4, 4)
            maps = [
                TimedStepMap(LINE, AffineIntTimed(const_poly(1, 2), const_poly(b, 2)))
                for _ in (1, 2)
            ]
        systems.append(NonAutonomousSystem(mi(0, 0), maps))
    return systems


class TestLiftedCompatibilityCheck:
    def test_autonomous_checker_on_lifted_maps_is_sampled(self):
        # lifted rules have no closed composition, so the generic checker
        # can only sample the augmented space and must say so
        from latticerec.autonomous import check_compatibility
        from latticerec.errors import UndecidableEqualityError

        sys_ = own_axis_translation_system(2)
        lifted = lift(sys_)
        with pytest.raises(UndecidableEqualityError):
            check_compatibility(lifted)
        sample = [AugmentedState(mi(i, j), 0) for i in range(3) for j in range(3)]
        report = check_compatibility(lifted, sample=sample)
        assert report.status == "sampled_compatible"
        assert report.decided == "sampled"


class TestLiftSolveEquivalence:
    def test_lift_then_solve_equals_direct(self):
        rng = random.Random(2024)
        t0 = mi(0, 0)
        for sys_ in seeded_timed_systems(8, rng):
            report = check_compatibility_timed(sys_, (mi(0, 0), mi(4, 4)))
            assert report.status == "compatible"
            lifted = lift(sys_)
            for t in box_points(mi(0, 0), mi(3, 3)):
                direct = eval_timed(sys_, t0, 5, t, report=report)
                via = eval_forward(lifted, t0, AugmentedState(t0, 5), t, report=report)
                assert via.time_part == t
                assert via.state_part == direct

    def test_all_paths_agree(self):
        rng = random.Random(99)
        t0, t = mi(0, 0), mi(2, 2)
        for sys_ in seeded_timed_systems(5, rng):
            report = check_compatibility_timed(sys_, (t0, t))
            lifted = lift(sys_)
            finals = set()
            for path in enumerate_monotone_paths(t0, t):
                traj = walk_path(lifted, AugmentedState(t0, 3), path)
                finals.add(traj.final_state)
            assert len(finals) == 1
            assert finals.pop().state_part == eval_timed(sys_, t0, 3, t, report=report)

    def test_time_shift_covariance(self):
        # solving from t0 with clock s0 re-indexes the solution from s0
        rng = random.Random(7)
        (sys_,) = seeded_timed_systems(1, rng)
        t0, s0 = mi(1, 1), mi(2, 0)
        lifted = lift(sys_)
        report = check_compatibility_timed(sys_, (mi(0, 0), mi(6, 6)))
        for t in box_points(t0, mi(3, 3)):
            shifted = eval_forward(
                lifted, t0, AugmentedState(s0, 4), t, report=report
            )
            assert shifted.time_part == t - t0 + s0
            assert shifted.state_part == eval_timed(
                sys_, s0, 4, t - t0 + s0, report=report
            )
