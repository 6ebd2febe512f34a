"""Direct formulas for the special recurrence families.

When every step map is translation by a fixed element of one commutative
monoid, the solution is a single monoid power acting once on the start
state.  Two specializations get their own even shorter forms: the additive
case (a multidimensional arithmetic progression, scalar multiples and sums
only) and the commuting-matrix case (a product of exact matrix powers).
These routes are intentionally independent of the generic evaluator so the
two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import (
    DimensionMismatchError,
    CapExceededError,
    NonCommutingError,
    NotInvertibleError,
    RuleError,
    StateDomainError,
)
from .lattice import MultiIndex
from .limits import Limits
from .matrices import Matrix
from .monoids import (
    Action,
    FiniteAction,
    FiniteMonoid,
    Monoid,
)
from .statespace import State, StateSpace, contains


@dataclass(frozen=True)
class MonoidActionSystem:
    """Translations by pairwise-commuting elements under one monoid action.

    Element commutation is verified at construction: exhaustively cheap for
    a finite monoid table and by direct product comparison for the built-in
    monoids.  Action axioms are verified exhaustively for finite action
    tables; for the built-ins they hold by construction and that assumption
    is recorded in ``assumptions`` so reports can echo it.
    """

    monoid: Monoid
    elements: tuple[Any, ...]
    space: StateSpace
    action: Action
    assumptions: tuple[str, ...] = field(init=False)

    def __init__(self, monoid, elements, space, action):
        elements = tuple(elements)
        if not elements:
            raise DimensionMismatchError("a system needs at least one element")
        for a in elements:
            if not monoid.contains(a):
                raise RuleError(f"element {a!r} is not in the monoid")
        for i in range(len(elements)):
            for j in range(i + 1, len(elements)):
                left = monoid.op(elements[i], elements[j])
                right = monoid.op(elements[j], elements[i])
                if left != right:
                    raise NonCommutingError(
                        f"elements on axes {i + 1} and {j + 1} do not commute: "
                        f"{left!r} != {right!r}"
                    )
        if isinstance(action, FiniteAction):
            if not isinstance(monoid, FiniteMonoid):
                raise RuleError("action tables need a finite monoid")
            action.check_axioms(monoid)
            assumptions = ("action axioms verified exhaustively",)
        else:
            assumptions = ("action axioms assumed for the built-in action",)
        object.__setattr__(self, "monoid", monoid)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "assumptions", assumptions)

    @property
    def m(self) -> int:
        return len(self.elements)


def eval_monoid(
    sys: MonoidActionSystem, t0: MultiIndex, x0: State, t: MultiIndex
) -> State:
    """Combine the per-axis element powers, then act once on x0.

    Negative exponents need the element to be invertible in the monoid.
    """
    if t0.dim != sys.m or t.dim != sys.m:
        raise DimensionMismatchError("index dimension does not match the system")
    if not contains(sys.space, x0):
        raise StateDomainError(f"state {x0!r} outside {sys.space!r}")
    combined = sys.monoid.identity
    for alpha in range(1, sys.m + 1):
        delta = t[alpha] - t0[alpha]
        try:
            power = sys.monoid.power(sys.elements[alpha - 1], delta)
        except NotInvertibleError as exc:
            raise NotInvertibleError(
                f"negative exponent {delta} on axis {alpha}: {exc}"
            ) from None
        combined = sys.monoid.op(combined, power)
    return sys.action.apply(combined, x0)


AdditiveElement = Any  # int, Fraction, or a tuple of them


def _scale(k: int, a: AdditiveElement) -> AdditiveElement:
    if isinstance(a, tuple):
        return tuple(_scale(k, c) for c in a)
    return k * a


def _add(a: AdditiveElement, b: AdditiveElement) -> AdditiveElement:
    if isinstance(a, tuple):
        if not isinstance(b, tuple) or len(a) != len(b):
            raise RuleError("mismatched additive shapes")
        return tuple(_add(x, y) for x, y in zip(a, b))
    return a + b


def eval_additive(
    a: Sequence[AdditiveElement], t0: MultiIndex, x0: AdditiveElement, t: MultiIndex
) -> AdditiveElement:
    """Arithmetic-progression form: x0 plus per-axis multiples, no iteration."""
    if t0.dim != len(a) or t.dim != len(a):
        raise DimensionMismatchError("index dimension does not match the element list")
    total = x0
    for alpha in range(1, len(a) + 1):
        total = _add(total, _scale(t[alpha] - t0[alpha], a[alpha - 1]))
    return total


def matrix_power(A: Matrix, k: int, *, limits: Limits = Limits()) -> Matrix:
    """Exact k-th power by repeated squaring; negative k inverts first.

    Rational entries grow with the exponent, so the rational-mode cap is
    small; modular entries stay bounded and allow huge exponents.
    """
    cap = limits.modular_exponent_cap if A.modulus is not None else limits.exponent_cap
    if abs(k) > cap:
        raise CapExceededError(f"exponent {k} exceeds cap {cap}")
    return A.pow(k)


def eval_matrix_system(
    matrices: Sequence[Matrix],
    t0: MultiIndex,
    x0: Sequence,
    t: MultiIndex,
    *,
    limits: Limits = Limits(),
) -> tuple:
    """Geometric-progression form: a product of matrix powers applied to x0.

    The matrices must pairwise commute (checked entrywise, exactly, before
    any evaluation); the product is assembled in axis order for determinism
    even though commutation makes the order irrelevant.  Negative exponents
    need the corresponding matrix to be invertible.
    """
    mats = list(matrices)
    if not mats:
        raise DimensionMismatchError("a system needs at least one matrix")
    if t0.dim != len(mats) or t.dim != len(mats):
        raise DimensionMismatchError("index dimension does not match the matrix list")
    n = mats[0].dim
    for A in mats:
        if A.dim != n or A.modulus != mats[0].modulus:
            raise RuleError("matrices must share one size and modulus")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            left = mats[i] @ mats[j]
            right = mats[j] @ mats[i]
            if left != right:
                row, col = next(
                    (r, c)
                    for r in range(n)
                    for c in range(n)
                    if left.rows[r][c] != right.rows[r][c]
                )
                raise NonCommutingError(
                    f"matrices on axes {i + 1} and {j + 1} do not commute at "
                    f"entry ({row}, {col}): {left.rows[row][col]} != {right.rows[row][col]}"
                )
    if len(x0) != n:
        raise StateDomainError(f"start vector length {len(x0)} != matrix size {n}")
    product = Matrix.identity(n, mats[0].modulus)
    for alpha in range(1, len(mats) + 1):
        delta = t[alpha] - t0[alpha]
        product = product @ matrix_power(mats[alpha - 1], delta, limits=limits)
    return product.apply(tuple(x0))
