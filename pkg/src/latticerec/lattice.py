"""Integer lattice indices, the componentwise partial order, and monotone paths.

A :class:`MultiIndex` is a point of the m-dimensional integer lattice.  The
componentwise order makes the lattice a poset; between two comparable points
every "monotone path" (a sequence of unit steps along the axes) has the same
multiset of step labels, and the number of distinct interleavings is a
multinomial coefficient.  Path enumeration here is the brute-force oracle the
rest of the package checks its closed-form evaluators against, so it is
deliberately simple and capped.

Axes are 1-based everywhere a user can see them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    AxisRangeError,
    CapExceededError,
    CoordinateOverflowError,
    DimensionMismatchError,
    IncomparableError,
)

_INT64_MIN = -(1 << 63)
_INT64_MAX = (1 << 63) - 1

DEFAULT_PATH_CAP = 10_000


def _checked(value: int) -> int:
    if not _INT64_MIN <= value <= _INT64_MAX:
        raise CoordinateOverflowError(f"coordinate {value} outside signed 64-bit range")
    return value


@dataclass(frozen=True)
class MultiIndex:
    """A point of Z^m with checked 64-bit coordinates.

    Arithmetic is componentwise and exact; leaving the signed 64-bit range
    raises instead of wrapping, because silent wraparound would corrupt the
    exponents every evaluator is built on.
    """

    coords: tuple[int, ...]

    def __init__(self, coords: Sequence[int]):
        cs = tuple(int(c) for c in coords)
        if len(cs) == 0:
            raise DimensionMismatchError("dimension must be at least 1")
        for c in cs:
            _checked(c)
        object.__setattr__(self, "coords", cs)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, axis: int) -> int:
        """Coordinate on a 1-based axis."""
        if not 1 <= axis <= self.dim:
            raise AxisRangeError(f"axis {axis} outside 1..{self.dim}")
        return self.coords[axis - 1]

    def _require_same_dim(self, other: "MultiIndex") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.dim} vs {other.dim}"
            )

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        self._require_same_dim(other)
        return MultiIndex(tuple(_checked(a + b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        self._require_same_dim(other)
        return MultiIndex(tuple(_checked(a - b) for a, b in zip(self.coords, other.coords)))

    def __repr__(self) -> str:
        return f"MultiIndex{self.coords}"


def ones(m: int) -> MultiIndex:
    """The all-ones index of dimension m."""
    if m < 1:
        raise DimensionMismatchError("dimension must be at least 1")
    return MultiIndex((1,) * m)


def unit(axis: int, m: int) -> MultiIndex:
    """Unit index: 1 on the given 1-based axis, 0 elsewhere."""
    if m < 1:
        raise DimensionMismatchError("dimension must be at least 1")
    if not 1 <= axis <= m:
        raise AxisRangeError(f"axis {axis} outside 1..{m}")
    return MultiIndex(tuple(1 if a == axis else 0 for a in range(1, m + 1)))


def leq(s: MultiIndex, t: MultiIndex) -> bool:
    """Componentwise partial order: true iff s^a <= t^a on every axis."""
    s._require_same_dim(t)
    return all(a <= b for a, b in zip(s.coords, t.coords))


def multinomial(deltas: Sequence[int]) -> int:
    """Number of interleavings of a step multiset, by exact factorials."""
    from math import factorial

    total = sum(deltas)
    count = factorial(total)
    for d in deltas:
        count //= factorial(d)
    return count


@dataclass(frozen=True)
class MonotonePath:
    """A start point plus a sequence of 1-based axis steps.

    Replaying the steps from ``start`` visits a chain of lattice points that
    never decreases on any axis.
    """

    start: MultiIndex
    steps: tuple[int, ...]

    def __init__(self, start: MultiIndex, steps: Sequence[int]):
        ss = tuple(int(s) for s in steps)
        for s in ss:
            if not 1 <= s <= start.dim:
                raise AxisRangeError(f"step axis {s} outside 1..{start.dim}")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "steps", ss)

    @property
    def end(self) -> MultiIndex:
        e = self.start
        for s in self.steps:
            e = e + unit(s, e.dim)
        return e

    def points(self) -> Iterator[MultiIndex]:
        """All visited points, start first, end last."""
        p = self.start
        yield p
        for s in self.steps:
            p = p + unit(s, p.dim)
            yield p


def enumerate_monotone_paths(
    t0: MultiIndex, t: MultiIndex, cap: int = DEFAULT_PATH_CAP
) -> list[MonotonePath]:
    """Every monotone path from t0 to t, in lexicographic step order.

    The path count is the multinomial coefficient of the per-axis step
    counts; if it would exceed ``cap`` the enumeration refuses up front.
    """
    if not leq(t0, t):
        raise IncomparableError(f"{t0} is not componentwise <= {t}")
    deltas = [(t.coords[i] - t0.coords[i]) for i in range(t0.dim)]
    total = multinomial(deltas)
    if total > cap:
        raise CapExceededError(f"{total} paths exceed cap {cap}")

    m = t0.dim
    paths: list[MonotonePath] = []
    prefix: list[int] = []

    def extend(remaining: list[int]) -> None:
        if not any(remaining):
            paths.append(MonotonePath(t0, tuple(prefix)))
            return
        for axis in range(1, m + 1):
            if remaining[axis - 1] > 0:
                remaining[axis - 1] -= 1
                prefix.append(axis)
                extend(remaining)
                prefix.pop()
                remaining[axis - 1] += 1

    extend(deltas)
    return paths


def box_points(lo: MultiIndex, hi: MultiIndex) -> Iterator[MultiIndex]:
    """Row-major sweep of the box [lo, hi]; axis 1 varies slowest."""
    if not leq(lo, hi):
        raise IncomparableError(f"{lo} is not componentwise <= {hi}")

    def sweep(axis: int, partial: list[int]) -> Iterator[MultiIndex]:
        if axis > lo.dim:
            yield MultiIndex(tuple(partial))
            return
        for v in range(lo.coords[axis - 1], hi.coords[axis - 1] + 1):
            partial.append(v)
            yield from sweep(axis + 1, partial)
            partial.pop()

    yield from sweep(1, [])


def box_volume(lo: MultiIndex, hi: MultiIndex) -> int:
    if not leq(lo, hi):
        raise IncomparableError(f"{lo} is not componentwise <= {hi}")
    vol = 1
    for a, b in zip(lo.coords, hi.coords):
        vol *= b - a + 1
    return vol
