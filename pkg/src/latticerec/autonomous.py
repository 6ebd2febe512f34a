"""Autonomous systems: one commuting-candidate step map per lattice axis.

The compatibility checker decides, pair by pair, whether the maps commute,
and an incompatible verdict always carries a concrete witness state.  For
compatible systems the forward evaluator composes map powers (innermost the
last axis, outermost the first), which costs O(sum over axes of log of the
exponent) map compositions for the closed rule families.  The path walker
and the path-independence check are the deliberately dumb counterpart used
to cross-examine the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import (
    CapExceededError,
    DimensionMismatchError,
    IncomparableError,
    IncompatibleSystemError,
    LatticeRecError,
)
from .lattice import (
    MonotonePath,
    MultiIndex,
    box_points,
    box_volume,
    enumerate_monotone_paths,
    leq,
    unit,
)
from .limits import Limits
from .statespace import (
    ModularLine,
    ModularVector,
    State,
    StepMap,
    apply,
    compose,
    contains,
    iterate,
    iterate_mode,
    maps_equal,
)
from .errors import StateDomainError

COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
SAMPLED_COMPATIBLE = "sampled_compatible"


@dataclass(frozen=True)
class AutonomousSystem:
    """m step maps over one shared state space."""

    maps: tuple[StepMap, ...]

    def __init__(self, maps: Sequence[StepMap]):
        ms = tuple(maps)
        if not ms:
            raise DimensionMismatchError("a system needs at least one map")
        space = ms[0].domain
        for step in ms:
            if step.domain != space:
                raise DimensionMismatchError("all maps must share one state space")
        object.__setattr__(self, "maps", ms)

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def space(self):
        return self.maps[0].domain


@dataclass(frozen=True)
class CompatibilityReport:
    """Verdict of the pairwise commutation check.

    ``witnesses`` holds one (alpha, beta, state) triple per failing pair,
    found in increasing state order with pairs scanned lexicographically.
    A "sampled_compatible" status means some pair was decided only on a
    sample and the verdict is not conclusive.
    """

    status: str
    witnesses: tuple[tuple[int, int, State], ...]
    checked_pairs: int
    decided: str


@dataclass(frozen=True)
class Trajectory:
    """States recorded along a monotone walk, one lattice point per step."""

    points: tuple[tuple[MultiIndex, State], ...]

    def __init__(self, points):
        pts = tuple((idx, st) for idx, st in points)
        for (a, _), (b, _) in zip(pts, pts[1:]):
            step = b - a
            if sorted(step.coords) != [0] * (a.dim - 1) + [1]:
                raise LatticeRecError("trajectory indices must advance by unit steps")
        object.__setattr__(self, "points", pts)

    @property
    def final_state(self) -> State:
        return self.points[-1][1]


def check_compatibility(
    sys: AutonomousSystem, sample: Sequence[State] | None = None
) -> CompatibilityReport:
    """Check every unordered pair of maps for commutation."""
    witnesses: list[tuple[int, int, State]] = []
    methods: set[str] = set()
    pairs = 0
    for alpha in range(1, sys.m + 1):
        for beta in range(alpha + 1, sys.m + 1):
            pairs += 1
            ga, gb = sys.maps[alpha - 1], sys.maps[beta - 1]
            result = maps_equal(compose(ga, gb), compose(gb, ga), sample)
            methods.add(result.decided)
            if not result.equal:
                witnesses.append((alpha, beta, result.witness))
    if witnesses:
        status = INCOMPATIBLE
    elif "sampled" in methods:
        status = SAMPLED_COMPATIBLE
    else:
        status = COMPATIBLE
    if pairs == 0:
        decided = "trivial"
    elif len(methods) == 1:
        decided = methods.pop()
    else:
        decided = "mixed"
    return CompatibilityReport(status, tuple(witnesses), pairs, decided)


@lru_cache(maxsize=None)
def _cached_check(sys: AutonomousSystem) -> CompatibilityReport:
    return check_compatibility(sys)


def resolve_compatibility(
    sys: AutonomousSystem,
    report: CompatibilityReport | None,
    unsafe: bool,
) -> CompatibilityReport | None:
    """Report under which an evaluation may run; None when overridden."""
    if unsafe:
        return report
    if report is None:
        report = _cached_check(sys)
    if report.status == INCOMPATIBLE:
        raise IncompatibleSystemError(
            f"maps do not commute (witnesses: {report.witnesses}); "
            "pass unsafe=True to evaluate anyway"
        )
    return report


def _axis_exponent_cap(step: StepMap, limits: Limits) -> int | None:
    mode = iterate_mode(step)
    if mode == "cycle":
        return None
    if mode == "binary" and isinstance(step.domain, (ModularLine, ModularVector)):
        return limits.modular_exponent_cap
    return limits.exponent_cap


def eval_forward(
    sys: AutonomousSystem,
    t0: MultiIndex,
    x0: State,
    t: MultiIndex,
    *,
    report: CompatibilityReport | None = None,
    unsafe: bool = False,
    limits: Limits = Limits(),
) -> State:
    """The solution value at t >= t0 by composed map powers.

    The last axis's power is applied first and the first axis's power last.
    Refuses incompatible systems unless ``unsafe`` is set; an evaluation
    under a sampled verdict is allowed, since the caller can read the status
    from the report it passed or from the cached check.
    """
    if t0.dim != sys.m or t.dim != sys.m:
        raise DimensionMismatchError(
            f"index dimension {t0.dim}/{t.dim} != system dimension {sys.m}"
        )
    if not leq(t0, t):
        raise IncomparableError(f"target {t} is not >= start {t0}")
    resolve_compatibility(sys, report, unsafe)
    if not contains(sys.space, x0):
        raise StateDomainError(f"state {x0!r} outside {sys.space!r}")
    x = x0
    for alpha in range(sys.m, 0, -1):
        delta = t[alpha] - t0[alpha]
        cap = _axis_exponent_cap(sys.maps[alpha - 1], limits)
        if cap is not None and delta > cap:
            raise CapExceededError(f"exponent {delta} on axis {alpha} exceeds cap {cap}")
        x = iterate(sys.maps[alpha - 1], delta, x)
    return x


def describe_route(sys: AutonomousSystem, t0: MultiIndex, t: MultiIndex) -> list[dict]:
    """Per-axis exponent and exponentiation mode, for result documents."""
    return [
        {
            "axis": alpha,
            "exponent": t[alpha] - t0[alpha],
            "mode": iterate_mode(sys.maps[alpha - 1]),
        }
        for alpha in range(1, sys.m + 1)
    ]


def walk_path(sys: AutonomousSystem, x0: State, path: MonotonePath) -> Trajectory:
    """Apply the labeled map once per step, recording every visited state."""
    if path.start.dim != sys.m:
        raise DimensionMismatchError("path dimension does not match the system")
    if not contains(sys.space, x0):
        raise StateDomainError(f"state {x0!r} outside {sys.space!r}")
    points = [(path.start, x0)]
    index, state = path.start, x0
    for axis in path.steps:
        state = apply(sys.maps[axis - 1], state)
        index = index + unit(axis, sys.m)
        points.append((index, state))
    return Trajectory(tuple(points))


@dataclass(frozen=True)
class PathIndependence:
    """All monotone-path endpoints between two lattice points.

    ``endpoints`` pairs each distinct endpoint value with the first path
    (in lexicographic step order) that produced it.  Independence requires a
    single value equal to the closed-form result.
    """

    independent: bool
    path_count: int
    endpoints: tuple[tuple[State, tuple[int, ...]], ...]
    closed_form: State


def path_independence_check(
    sys: AutonomousSystem,
    t0: MultiIndex,
    x0: State,
    t: MultiIndex,
    cap: int = Limits().path_cap,
) -> PathIndependence:
    """Walk every monotone path from t0 to t and compare the endpoints.

    This is the brute-force uniqueness oracle, so it evaluates the closed
    form even for incompatible systems (the whole point is to expose their
    disagreement).
    """
    paths = enumerate_monotone_paths(t0, t, cap)
    seen: dict[State, tuple[int, ...]] = {}
    for path in paths:
        end = walk_path(sys, x0, path).final_state
        if end not in seen:
            seen[end] = path.steps
    closed = eval_forward(sys, t0, x0, t, unsafe=True)
    endpoints = tuple(seen.items())
    independent = len(endpoints) == 1 and endpoints[0][0] == closed
    return PathIndependence(independent, len(paths), endpoints, closed)


@dataclass(frozen=True)
class Grid:
    """Box of solution values, stored row-major (axis 1 slowest)."""

    t0: MultiIndex
    corner: MultiIndex
    cells: tuple[tuple[MultiIndex, State], ...]

    def value_at(self, t: MultiIndex) -> State:
        for idx, state in self.cells:
            if idx == t:
                return state
        raise KeyError(t)


def eval_box(
    sys: AutonomousSystem,
    t0: MultiIndex,
    x0: State,
    corner: MultiIndex,
    *,
    report: CompatibilityReport | None = None,
    unsafe: bool = False,
    limits: Limits = Limits(),
) -> Grid:
    """Fill the box [t0, corner] by a single dynamic-programming sweep.

    Each cell is computed from exactly one predecessor (the lowest axis with
    a positive offset); the box corners are then spot-checked against the
    closed form.
    """
    if not leq(t0, corner):
        raise IncomparableError(f"corner {corner} is not >= {t0}")
    volume = box_volume(t0, corner)
    if volume > limits.volume_cap:
        raise CapExceededError(f"box volume {volume} exceeds cap {limits.volume_cap}")
    resolved = resolve_compatibility(sys, report, unsafe)
    if not contains(sys.space, x0):
        raise StateDomainError(f"state {x0!r} outside {sys.space!r}")
    values: dict[MultiIndex, State] = {}
    for point in box_points(t0, corner):
        if point == t0:
            values[point] = x0
            continue
        axis = next(a for a in range(1, sys.m + 1) if point[a] > t0[a])
        prev = point - unit(axis, sys.m)
        values[point] = apply(sys.maps[axis - 1], values[prev])
    for corner_point in _box_corners(t0, corner):
        direct = eval_forward(
            sys, t0, x0, corner_point, report=resolved, unsafe=unsafe, limits=limits
        )
        if direct != values[corner_point]:
            raise LatticeRecError(
                f"grid sweep disagrees with the closed form at {corner_point}"
            )
    return Grid(t0, corner, tuple(values.items()))


def _box_corners(lo: MultiIndex, hi: MultiIndex):
    m = lo.dim
    for mask in range(1 << m):
        yield MultiIndex(
            tuple(
                hi.coords[i] if mask & (1 << i) else lo.coords[i] for i in range(m)
            )
        )
