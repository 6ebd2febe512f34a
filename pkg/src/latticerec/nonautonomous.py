"""Time-dependent systems and their reduction to autonomous ones.

A timed map takes the current lattice point alongside the state.  Augmenting
the state with the time itself turns the whole system into an autonomous one
("the lift"): each lifted map advances its axis's clock by one and applies
the timed rule at the old clock value.  The time component of any lifted
solution is forced to move in lockstep with the lattice index, which is what
makes the reduction faithful and what :func:`verify_time_component` checks.

Timed rules are either finite per-time lookup tables (evaluation outside the
recorded window is an error, never an extrapolation) or symbolic: affine or
matrix rules whose coefficients are integer polynomials in the time
coordinates, one univariate polynomial per axis, which keeps the commutation
check decidable by evaluating on a large-enough grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .autonomous import (
    COMPATIBLE,
    INCOMPATIBLE,
    SAMPLED_COMPATIBLE,
    AutonomousSystem,
    CompatibilityReport,
    Trajectory,
)
from .errors import (
    DimensionMismatchError,
    IncomparableError,
    LatticeRecError,
    RuleError,
    StateDomainError,
    TimeWindowError,
)
from .lattice import MultiIndex, box_points, leq, unit
from .matrices import Matrix
from .statespace import (
    FiniteEnumerated,
    IntegerLine,
    IntegerVector,
    ModularVector,
    RationalVector,
    State,
    StepMap,
    contains,
    default_state,
    is_finite,
    iter_states,
    probe_states,
)


# -- polynomials in the time coordinates --------------------------------------

@dataclass(frozen=True)
class AxisPolynomial:
    """const + sum over axes of a univariate integer polynomial in t^axis.

    ``per_axis[i][k]`` multiplies (t^(i+1))^(k+1); there are no cross terms.
    """

    const: int
    per_axis: tuple[tuple[int, ...], ...]

    def __init__(self, const: int, per_axis: Sequence[Sequence[int]]):
        object.__setattr__(self, "const", int(const))
        object.__setattr__(
            self, "per_axis", tuple(tuple(int(c) for c in coeffs) for coeffs in per_axis)
        )

    @property
    def dim(self) -> int:
        return len(self.per_axis)

    def eval_at(self, t: MultiIndex) -> int:
        if t.dim != self.dim:
            raise DimensionMismatchError("polynomial arity does not match the index")
        total = self.const
        for axis, coeffs in enumerate(self.per_axis, start=1):
            value = t[axis]
            power = value
            for c in coeffs:
                total += c * power
                power *= value
        return total

    def degree(self, axis: int) -> int:
        return len(self.per_axis[axis - 1])

    @staticmethod
    def constant(value: int, m: int) -> "AxisPolynomial":
        return AxisPolynomial(value, tuple(() for _ in range(m)))


# -- timed rules ---------------------------------------------------------------

@dataclass(frozen=True)
class TablePerTime:
    """A finite window of lookup tables, one per lattice time."""

    entries: tuple[tuple[MultiIndex, tuple[int, ...]], ...]

    def __init__(self, entries):
        fixed = tuple(sorted(((idx, tuple(img)) for idx, img in entries), key=lambda e: e[0].coords))
        if not fixed:
            raise RuleError("per-time table needs at least one entry")
        times = [idx for idx, _ in fixed]
        if len(set(times)) != len(times):
            raise RuleError("per-time table has duplicate times")
        object.__setattr__(self, "entries", fixed)

    def table_at(self, t: MultiIndex) -> tuple[int, ...]:
        for idx, images in self.entries:
            if idx == t:
                return images
        raise TimeWindowError(f"no table recorded at time {t}")

    def times(self) -> list[MultiIndex]:
        return [idx for idx, _ in self.entries]


@dataclass(frozen=True)
class AffineIntTimed:
    """x -> a(t)*x + b(t) with polynomial integer coefficients."""

    a: AxisPolynomial
    b: AxisPolynomial


@dataclass(frozen=True)
class MatrixTimed:
    """x -> A(t) x with each entry of A a polynomial in the time coordinates."""

    entries: tuple[tuple[AxisPolynomial, ...], ...]
    modulus: int | None = None

    def matrix_at(self, t: MultiIndex) -> Matrix:
        return Matrix(
            [[poly.eval_at(t) for poly in row] for row in self.entries], self.modulus
        )


TimedRule = TablePerTime | AffineIntTimed | MatrixTimed


@dataclass(frozen=True)
class TimedStepMap:
    domain: object
    rule: TimedRule

    def __post_init__(self):
        rule, domain = self.rule, self.domain
        if isinstance(rule, TablePerTime):
            if not isinstance(domain, FiniteEnumerated):
                raise RuleError("per-time tables need a finite enumerated space")
            for idx, images in rule.entries:
                if len(images) != domain.size or any(
                    not 0 <= v < domain.size for v in images
                ):
                    raise RuleError(f"bad table at time {idx}")
        elif isinstance(rule, AffineIntTimed):
            if not isinstance(domain, IntegerLine):
                raise RuleError("timed affine rules need the integer line")
            if rule.a.dim != rule.b.dim:
                raise RuleError("coefficient polynomials must share one arity")
        elif isinstance(rule, MatrixTimed):
            n = len(rule.entries)
            if not all(len(row) == n for row in rule.entries):
                raise RuleError("timed matrix must be square")
            ok = (
                isinstance(domain, (IntegerVector, RationalVector))
                and rule.modulus is None
                and domain.dim == n
            ) or (
                isinstance(domain, ModularVector)
                and rule.modulus == domain.modulus
                and domain.dim == n
            )
            if not ok:
                raise RuleError("timed matrix does not match the state space")
        else:
            raise RuleError(f"unknown timed rule {rule!r}")


def apply_timed(step: TimedStepMap, t: MultiIndex, x: State) -> State:
    if not contains(step.domain, x):
        raise StateDomainError(f"state {x!r} outside {step.domain!r}")
    rule = step.rule
    if isinstance(rule, TablePerTime):
        return rule.table_at(t)[x]
    if isinstance(rule, AffineIntTimed):
        return rule.a.eval_at(t) * x + rule.b.eval_at(t)
    return rule.matrix_at(t).apply(x)


@dataclass(frozen=True)
class NonAutonomousSystem:
    """m timed maps over one state space, defined for times >= t1."""

    t1: MultiIndex
    maps: tuple[TimedStepMap, ...]

    def __init__(self, t1: MultiIndex, maps: Sequence[TimedStepMap]):
        ms = tuple(maps)
        if not ms:
            raise DimensionMismatchError("a system needs at least one map")
        if t1.dim != len(ms):
            raise DimensionMismatchError(
                f"threshold dimension {t1.dim} != number of maps {len(ms)}"
            )
        space = ms[0].domain
        for step in ms:
            if step.domain != space:
                raise DimensionMismatchError("all maps must share one state space")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "maps", ms)

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def space(self):
        return self.maps[0].domain


# -- the lift ------------------------------------------------------------------

@dataclass(frozen=True)
class AugmentedState:
    """A (time, state) pair of the augmented space."""

    time_part: MultiIndex
    state_part: State


@dataclass(frozen=True)
class AugmentedSpace:
    """{s >= t1} x M: the state space the lifted maps act on."""

    threshold: MultiIndex
    base: object


@contains.register
def _(space: AugmentedSpace, y) -> bool:
    return (
        isinstance(y, AugmentedState)
        and y.time_part.dim == space.threshold.dim
        and leq(space.threshold, y.time_part)
        and contains(space.base, y.state_part)
    )


@default_state.register
def _(space: AugmentedSpace):
    return AugmentedState(space.threshold, default_state(space.base))


@dataclass(frozen=True)
class LiftedRule:
    """(s, x) -> (s + 1_axis, F_axis(s, x))."""

    timed: TimedStepMap
    axis: int
    m: int

    def image(self, domain, y: AugmentedState) -> AugmentedState:
        return AugmentedState(
            y.time_part + unit(self.axis, self.m),
            apply_timed(self.timed, y.time_part, y.state_part),
        )

    def validate_for(self, domain) -> None:
        if not isinstance(domain, AugmentedSpace):
            raise RuleError("lifted rules act on the augmented space")
        if domain.base != self.timed.domain:
            raise RuleError("augmented base space does not match the timed map")


def lift(sys: NonAutonomousSystem) -> AutonomousSystem:
    """The autonomous system on the augmented space equivalent to ``sys``."""
    space = AugmentedSpace(sys.t1, sys.space)
    return AutonomousSystem(
        tuple(
            StepMap(space, LiftedRule(sys.maps[alpha - 1], alpha, sys.m))
            for alpha in range(1, sys.m + 1)
        )
    )


# -- compatibility -------------------------------------------------------------

def _state_probes(sys: NonAutonomousSystem, sample: Sequence[State] | None):
    """Probe states plus whether they conclusively cover the space.

    All states on a finite space; two integers for affine rules and a basis
    for matrix rules (both sides of the commutation identity are affine or
    linear in the state, so agreement on the probes decides agreement on
    every state, for the times actually checked).
    """
    if is_finite(sys.space):
        return list(iter_states(sys.space)), True
    probes = probe_states(sys.space)
    if sample:
        seen = set(probes)
        for x in sample:
            if x not in seen:
                probes.append(x)
                seen.add(x)
    symbolic = all(isinstance(s.rule, (AffineIntTimed, MatrixTimed)) for s in sys.maps)
    return probes, symbolic


def _needed_grid(sys: NonAutonomousSystem) -> list[int]:
    """Per-axis point counts that make a sweep decide the identity globally.

    The commutation identity's two sides are, for fixed state, polynomials
    in the time coordinates; their per-axis degrees are bounded by sums of
    the coefficient degrees, so vanishing on a grid one larger than the
    degree on each axis forces vanishing everywhere.
    """
    m = sys.m
    needed = [1] * m
    for gamma in range(1, m + 1):
        degrees = []
        for step in sys.maps:
            rule = step.rule
            if isinstance(rule, AffineIntTimed):
                degrees.append(max(rule.a.degree(gamma), rule.b.degree(gamma)))
            elif isinstance(rule, MatrixTimed):
                degrees.append(
                    max(poly.degree(gamma) for row in rule.entries for poly in row)
                )
            else:
                return []  # table rules: coverage, not degrees, decides
        top = sorted(degrees)[-2:]
        needed[gamma - 1] = sum(top) + 1
    return needed


def check_compatibility_timed(
    sys: NonAutonomousSystem,
    window: tuple[MultiIndex, MultiIndex],
    sample: Sequence[State] | None = None,
) -> CompatibilityReport:
    """Sweep the timed commutation identity over a window of times.

    A violation is reported as a witness (alpha, beta, augmented state): the
    time and state where the two step orders disagree.  The verdict is
    "compatible" when the sweep covers every state dependency (always true
    with the built-in probes) — it certifies the window it swept; for
    polynomial rules a large-enough window certifies all times at once, and
    the report's ``decided`` field says "symbolic" in that case.
    """
    lo, hi = window
    if lo.dim != sys.m or hi.dim != sys.m:
        raise DimensionMismatchError("window dimension does not match the system")
    if not leq(sys.t1, lo):
        raise TimeWindowError(f"window start {lo} is below the threshold {sys.t1}")
    if not leq(lo, hi):
        raise IncomparableError(f"window {lo}..{hi} is empty")
    probes, state_conclusive = _state_probes(sys, sample)

    needed = _needed_grid(sys)
    if needed:
        time_conclusive = all(
            hi[g] - lo[g] + 1 >= needed[g - 1] for g in range(1, sys.m + 1)
        )
    else:
        time_conclusive = _tables_covered(sys, lo, hi)

    witnesses: list[tuple[int, int, AugmentedState]] = []
    checked = 0
    for alpha in range(1, sys.m + 1):
        for beta in range(alpha + 1, sys.m + 1):
            checked += 1
            witness = _pair_witness(sys, alpha, beta, lo, hi, probes)
            if witness is not None:
                witnesses.append((alpha, beta, witness))
    if witnesses:
        status = INCOMPATIBLE
    elif state_conclusive and time_conclusive:
        status = COMPATIBLE
    else:
        status = SAMPLED_COMPATIBLE
    decided = (
        "symbolic"
        if needed and status != INCOMPATIBLE and time_conclusive
        else "exhaustive"
        if state_conclusive and time_conclusive
        else "sampled"
    )
    if witnesses:
        decided = "exhaustive"
    return CompatibilityReport(status, tuple(witnesses), checked, decided)


def _pair_witness(sys, alpha, beta, lo, hi, probes):
    fa, fb = sys.maps[alpha - 1], sys.maps[beta - 1]
    ua, ub = unit(alpha, sys.m), unit(beta, sys.m)
    for t in box_points(lo, hi):
        if not _timed_defined(fa, t) or not _timed_defined(fb, t):
            continue
        if not (_timed_defined(fa, t + ub) and _timed_defined(fb, t + ua)):
            continue
        for x in probes:
            left = apply_timed(fa, t + ub, apply_timed(fb, t, x))
            right = apply_timed(fb, t + ua, apply_timed(fa, t, x))
            if left != right:
                return AugmentedState(t, x)
    return None


def _timed_defined(step: TimedStepMap, t: MultiIndex) -> bool:
    rule = step.rule
    if isinstance(rule, TablePerTime):
        return any(idx == t for idx, _ in rule.entries)
    return True


def _tables_covered(sys, lo, hi) -> bool:
    """Whether the sweep reaches every time at which the identity applies."""
    if not all(isinstance(step.rule, TablePerTime) for step in sys.maps):
        return False
    for alpha in range(1, sys.m + 1):
        for beta in range(alpha + 1, sys.m + 1):
            fa, fb = sys.maps[alpha - 1], sys.maps[beta - 1]
            ua, ub = unit(alpha, sys.m), unit(beta, sys.m)
            times = set(fa.rule.times()) | set(fb.rule.times())
            for t in times:
                checkable = (
                    _timed_defined(fa, t)
                    and _timed_defined(fb, t)
                    and _timed_defined(fa, t + ub)
                    and _timed_defined(fb, t + ua)
                )
                if checkable and not (leq(lo, t) and leq(t, hi)):
                    return False
    return True


def resolve_timed_compatibility(
    sys: NonAutonomousSystem,
    window: tuple[MultiIndex, MultiIndex],
    report: CompatibilityReport | None,
    unsafe: bool,
) -> CompatibilityReport | None:
    if unsafe:
        return report
    if report is None:
        report = check_compatibility_timed(sys, window)
    if report.status == INCOMPATIBLE:
        from .errors import IncompatibleSystemError

        raise IncompatibleSystemError(
            f"timed maps do not commute (witnesses: {report.witnesses}); "
            "pass unsafe=True to evaluate anyway"
        )
    return report


# -- evaluation ----------------------------------------------------------------

def eval_timed(
    sys: NonAutonomousSystem,
    t0: MultiIndex,
    x0: State,
    t: MultiIndex,
    *,
    report: CompatibilityReport | None = None,
    unsafe: bool = False,
) -> State:
    """Walk the canonical monotone path (axis 1 first, then axis 2, ...).

    Any monotone path gives the same answer once the maps commute over the
    traversed box, so a fixed order is just determinism.  No power formula
    applies here: the rule changes at every visited time.
    """
    if t0.dim != sys.m or t.dim != sys.m:
        raise DimensionMismatchError("index dimension does not match the system")
    if not leq(sys.t1, t0):
        raise TimeWindowError(f"start {t0} is below the threshold {sys.t1}")
    if not leq(t0, t):
        raise IncomparableError(f"target {t} is not >= start {t0}")
    resolve_timed_compatibility(sys, (t0, t), report, unsafe)
    if not contains(sys.space, x0):
        raise StateDomainError(f"state {x0!r} outside {sys.space!r}")
    current, x = t0, x0
    for alpha in range(1, sys.m + 1):
        for _ in range(t[alpha] - t0[alpha]):
            x = apply_timed(sys.maps[alpha - 1], current, x)
            current = current + unit(alpha, sys.m)
    return x


def verify_time_component(
    sys: NonAutonomousSystem,
    t0: MultiIndex,
    s0: MultiIndex,
    path_steps: Sequence[int],
    x0: State | None = None,
) -> bool:
    """Walk the lifted system and check the clock law at every visited point.

    Starting the clock at s0 while the lattice index starts at t0, the clock
    must read t - t0 + s0 at every visited index t.
    """
    if not leq(sys.t1, s0):
        raise TimeWindowError(f"clock start {s0} is below the threshold {sys.t1}")
    lifted = lift(sys)
    y = AugmentedState(s0, default_state(sys.space) if x0 is None else x0)
    index = t0
    from .statespace import apply as apply_map

    if y.time_part != index - t0 + s0:
        return False
    for axis in path_steps:
        y = apply_map(lifted.maps[axis - 1], y)
        index = index + unit(axis, sys.m)
        if y.time_part != index - t0 + s0:
            return False
    return True


def unlift_solution(trajectory: Trajectory) -> Trajectory:
    """Project a lifted trajectory back to plain states.

    Valid only for lifts started with the clock equal to the lattice index;
    any mismatch means the trajectory was not produced that way (or the lift
    is broken), so it is an error rather than a silent projection.
    """
    projected = []
    for idx, y in trajectory.points:
        if not isinstance(y, AugmentedState):
            raise LatticeRecError("trajectory states are not augmented")
        if y.time_part != idx:
            raise LatticeRecError(
                f"time component {y.time_part} disagrees with the index {idx}"
            )
        projected.append((idx, y.state_part))
    return Trajectory(tuple(projected))
