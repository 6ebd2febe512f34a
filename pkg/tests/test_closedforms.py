"""Monoid, additive, and matrix closed forms against the generic evaluator."""

import random
from fractions import Fraction

import pytest

from latticerec.autonomous import AutonomousSystem, eval_forward, walk_path
from latticerec.closedforms import (
    MonoidActionSystem,
    eval_additive,
    eval_matrix_system,
    eval_monoid,
    matrix_power,
)
from latticerec.errors import (
    CapExceededError,
    NonCommutingError,
    NotInvertibleError,
)
from latticerec.lattice import MonotonePath, MultiIndex
from latticerec.limits import Limits
from latticerec.matrices import Matrix
from latticerec.monoids import (
    AdditiveSelfAction,
    FiniteAction,
    FiniteMonoid,
    IntegerAdditive,
    MatrixMonoid,
    MatrixVectorAction,
    RationalMultiplicative,
    ScalingAction,
)
from latticerec.statespace import (
    FiniteEnumerated,
    IntegerLine,
    MatrixLinear,
    MonoidTranslate,
    RationalVector,
    StepMap,
)


def mi(*coords):
    return MultiIndex(coords)


def additive_action_system(*amounts):
    return MonoidActionSystem(
        IntegerAdditive(), amounts, IntegerLine(), AdditiveSelfAction()
    )


def canonical_steps(t0, t):
    steps = []
    for alpha in range(1, t0.dim + 1):
        steps.extend([alpha] * (t[alpha] - t0[alpha]))
    return tuple(steps)


class TestMonoidActionSystem:
    def test_identity_elements(self):
        sys_ = additive_action_system(0, 0)
        assert eval_monoid(sys_, mi(0, 0), 5, mi(3, 7)) == 5

    def test_non_commuting_matrix_elements_rejected(self):
        n = Matrix([[0, 1], [0, 0]])
        m = Matrix([[0, 0], [1, 0]])
        with pytest.raises(NonCommutingError):
            MonoidActionSystem(
                MatrixMonoid(2), (n, m), RationalVector(2), MatrixVectorAction(2)
            )

    def test_assumptions_recorded(self):
        sys_ = additive_action_system(1, 2)
        assert "assumed" in sys_.assumptions[0]
        cyc = FiniteMonoid(tuple(tuple((a + b) % 3 for b in range(3)) for a in range(3)))
        act = FiniteAction(tuple(tuple((g + x) % 3 for x in range(3)) for g in range(3)))
        fin = MonoidActionSystem(cyc, (1, 2), FiniteEnumerated(3), act)
        assert "verified" in fin.assumptions[0]


class TestEvalMonoid:
    def test_additive_case_matches_path_walk(self):
        sys_ = additive_action_system(2, 3)
        value = eval_monoid(sys_, mi(0, 0), 1, mi(2, 3))
        auto = AutonomousSystem(
            tuple(
                StepMap(IntegerLine(), MonoidTranslate(IntegerAdditive(), a, AdditiveSelfAction()))
                for a in (2, 3)
            )
        )
        walked = walk_path(auto, 1, MonotonePath(mi(0, 0), (1, 1, 2, 2, 2)))
        assert value == walked.final_state == 14

    def test_inverse_element_one_step_back(self):
        sys_ = additive_action_system(2, 3)
        assert eval_monoid(sys_, mi(0, 0), 1, mi(-1, 0)) == -1

    def test_geometric_progression(self):
        sys_ = MonoidActionSystem(
            RationalMultiplicative(),
            (Fraction(2), Fraction(3, 2)),
            RationalVector(1),
            ScalingAction(1),
        )
        assert eval_monoid(sys_, mi(0, 0), (Fraction(1),), mi(3, 2)) == (Fraction(18),)
        assert eval_monoid(sys_, mi(0, 0), (Fraction(1),), mi(-1, 0)) == (Fraction(1, 2),)

    def test_matrix_monoid_route_matches_matrix_system(self):
        a1 = Matrix([[1, 1], [0, 1]])
        a2 = Matrix([[1, 2], [0, 1]])
        sys_ = MonoidActionSystem(
            MatrixMonoid(2), (a1, a2), RationalVector(2), MatrixVectorAction(2)
        )
        t0, x0, t = mi(0, 0), (0, 1), mi(3, 2)
        assert eval_monoid(sys_, t0, x0, t) == eval_matrix_system([a1, a2], t0, x0, t)

    def test_finite_monoid_route_matches_autonomous(self):
        cyc = FiniteMonoid(tuple(tuple((a + b) % 4 for b in range(4)) for a in range(4)))
        act = FiniteAction(tuple(tuple((g + x) % 4 for x in range(4)) for g in range(4)))
        sys_ = MonoidActionSystem(cyc, (1, 2), FiniteEnumerated(4), act)
        auto = AutonomousSystem(
            (
                StepMap(FiniteEnumerated(4), MonoidTranslate(cyc, 1, act)),
                StepMap(FiniteEnumerated(4), MonoidTranslate(cyc, 2, act)),
            )
        )
        for dx in range(3):
            for dy in range(3):
                t = mi(dx, dy)
                assert eval_monoid(sys_, mi(0, 0), 3, t) == eval_forward(
                    auto, mi(0, 0), 3, t
                )

    def test_non_invertible_negative_exponent(self):
        absorbing = FiniteMonoid(((0, 1), (1, 1)))
        act = FiniteAction(((0, 1), (1, 1)))
        sys_ = MonoidActionSystem(absorbing, (1, 0), FiniteEnumerated(2), act)
        with pytest.raises(NotInvertibleError):
            eval_monoid(sys_, mi(0, 0), 0, mi(-1, 0))


class TestEvalAdditive:
    def test_start_point(self):
        assert eval_additive([5, 7], mi(1, 1), 9, mi(1, 1)) == 9

    def test_three_axis_example(self):
        assert eval_additive([1, 10, 100], mi(0, 0, 0), 0, mi(2, 3, 4)) == 432

    def test_matches_path_walk(self):
        auto = AutonomousSystem(
            tuple(
                StepMap(IntegerLine(), MonoidTranslate(IntegerAdditive(), a, AdditiveSelfAction()))
                for a in (1, 10, 100)
            )
        )
        t0, t = mi(0, 0, 0), mi(2, 3, 4)
        walked = walk_path(auto, 0, MonotonePath(t0, canonical_steps(t0, t)))
        assert eval_additive([1, 10, 100], t0, 0, t) == walked.final_state

    def test_matches_eval_monoid_on_random_instances(self):
        rng = random.Random(4242)
        for _ in range(50):
            m = rng.randint(1, 3)
            a = [rng.randint(-100, 100) for _ in range(m)]
            t0 = mi(*[rng.randint(-3, 3) for _ in range(m)])
            t = t0 + mi(*[rng.randint(0, 6) for _ in range(m)])
            x0 = rng.randint(-50, 50)
            sys_ = additive_action_system(*a)
            assert eval_additive(a, t0, x0, t) == eval_monoid(sys_, t0, x0, t)

    def test_vector_elements(self):
        a = [(1, 0), (0, 2)]
        assert eval_additive(a, mi(0, 0), (5, 5), mi(2, 3)) == (7, 11)

    def test_translation_structure(self):
        # difference of two runs equals the difference of the starts
        a = [3, -4]
        t0, t = mi(0, 0), mi(2, 5)
        d = eval_additive(a, t0, 10, t) - eval_additive(a, t0, 4, t)
        assert d == 10 - 4


class TestMatrixPower:
    def test_zero_power_is_identity(self):
        a = Matrix([[5, 1], [2, 2]])
        assert matrix_power(a, 0) == Matrix.identity(2)

    def test_unitriangular_fifth_power_vs_naive(self):
        a = Matrix([[1, 1], [0, 1]])
        acc = Matrix.identity(2)
        for _ in range(5):
            acc = acc @ a
        assert matrix_power(a, 5) == acc == Matrix([[1, 5], [0, 1]])

    def test_diagonal_inverse(self):
        a = Matrix([[2, 0], [0, 3]])
        inv = matrix_power(a, -1)
        assert inv == Matrix([[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
        assert a @ inv == Matrix.identity(2)

    def test_rational_cap(self):
        a = Matrix([[2]])
        with pytest.raises(CapExceededError):
            matrix_power(a, 2**21)

    def test_modular_mode_allows_huge_exponents(self):
        a = Matrix([[2]], modulus=1_000_003)
        assert matrix_power(a, 2**40) == Matrix([[pow(2, 2**40, 1_000_003)]], modulus=1_000_003)


class TestEvalMatrixSystem:
    A1 = Matrix([[1, 1], [0, 1]])
    A2 = Matrix([[1, 2], [0, 1]])

    def test_identity_matrices(self):
        eye = Matrix.identity(2)
        assert eval_matrix_system([eye, eye], mi(0, 0), (3, 4), mi(5, 2)) == (3, 4)

    def test_hand_example_and_path_walk(self):
        t0, x0, t = mi(0, 0), (0, 1), mi(3, 2)
        value = eval_matrix_system([self.A1, self.A2], t0, x0, t)
        assert value == (7, 1)
        space = RationalVector(2)
        auto = AutonomousSystem(
            (StepMap(space, MatrixLinear(self.A1)), StepMap(space, MatrixLinear(self.A2)))
        )
        walked = walk_path(auto, x0, MonotonePath(t0, canonical_steps(t0, t)))
        assert walked.final_state == value

    def test_non_commuting_rejected_with_entry_witness(self):
        n = Matrix([[0, 1], [0, 0]])
        m = Matrix([[0, 0], [1, 0]])
        with pytest.raises(NonCommutingError) as err:
            eval_matrix_system([n, m], mi(0, 0), (1, 0), mi(1, 1))
        assert "(0, 0)" in str(err.value)

    def test_matches_autonomous_route(self):
        space = RationalVector(2)
        auto = AutonomousSystem(
            (StepMap(space, MatrixLinear(self.A1)), StepMap(space, MatrixLinear(self.A2)))
        )
        for dx in range(4):
            for dy in range(3):
                t = mi(dx, dy)
                assert eval_matrix_system(
                    [self.A1, self.A2], mi(0, 0), (1, 1), t
                ) == eval_forward(auto, mi(0, 0), (1, 1), t)

    def test_negative_exponents_round_trip(self):
        t0, x0 = mi(0, 0), (2, 5)
        forward = eval_matrix_system([self.A1, self.A2], t0, x0, mi(2, 3))
        back = eval_matrix_system([self.A1, self.A2], mi(2, 3), forward, t0)
        assert back == x0

    def test_singular_negative_exponent(self):
        singular = Matrix([[1, 1], [1, 1]])
        with pytest.raises(NotInvertibleError):
            eval_matrix_system([singular, singular], mi(0, 0), (1, 0), mi(-1, 0))

    def test_mod_p_system_with_large_exponents(self):
        p = 97
        a1 = Matrix([[1, 1], [0, 1]], modulus=p)
        a2 = Matrix([[1, 2], [0, 1]], modulus=p)
        big = mi(2**40, 2**30)
        value = eval_matrix_system([a1, a2], mi(0, 0), (0, 1), big)
        # unitriangular powers shift by the exponent, reduced mod p
        expected = ((2**40 + 2 * 2**30) % p, 1)
        assert value == expected

    def test_mismatched_moduli_rejected(self):
        from latticerec.errors import RuleError

        with pytest.raises(RuleError):
            eval_matrix_system(
                [Matrix([[1]], modulus=5), Matrix([[1]])], mi(0, 0), (1,), mi(1, 1)
            )
