"""Backward machinery: map classification, inverses, and lattice-wide evaluation.

Surjectivity decides whether a solution can be extended one step backward at
all, injectivity whether that extension is unique, and bijectivity of every
map buys evaluation on the whole lattice with signed exponents.  On all
supported rule families surjectivity already forces bijectivity (pigeonhole
on finite spaces; coefficient/determinant conditions on the symbolic ones),
so the right-inverse witness kind exists for API completeness but inversion
always produces a two-sided inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Callable

from .autonomous import (
    AutonomousSystem,
    CompatibilityReport,
    resolve_compatibility,
)
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    NotBijectiveError,
    NotSurjectiveError,
    RuleError,
    StateDomainError,
)
from .exact import mod_inverse
from .lattice import MultiIndex, unit
from .limits import Limits
from .matrices import Matrix
from .statespace import (
    AffineInt,
    FiniteEnumerated,
    IntegerVector,
    MatrixLinear,
    ModularAffine,
    MonoidTranslate,
    State,
    StepMap,
    Table,
    _normal_form,
    apply,
    contains,
    is_finite,
    iter_states,
    iterate_signed,
)

YES = "yes"
NO = "no"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class MapClassification:
    """Injectivity and surjectivity verdicts with verifiable witnesses.

    A "no" for injectivity carries two states sharing one image; a "no" for
    surjectivity carries an element with empty preimage.
    """

    injective: str
    surjective: str
    collision: tuple[State, State] | None = None
    missed: State | None = None


def _classify_exhaustive(step: StepMap) -> MapClassification:
    first_preimage: dict[State, State] = {}
    collision = None
    for x in iter_states(step.domain):
        y = apply(step, x)
        if y in first_preimage and collision is None:
            collision = (first_preimage[y], x)
        first_preimage.setdefault(y, x)
    missed = next((y for y in iter_states(step.domain) if y not in first_preimage), None)
    return MapClassification(
        injective=NO if collision else YES,
        surjective=NO if missed is not None else YES,
        collision=collision,
        missed=missed,
    )


def _classify_matrix(matrix: Matrix, domain) -> MapClassification:
    det = matrix.det()
    if det == 0:
        kernel = matrix.kernel_vector()
        if isinstance(domain, IntegerVector):
            scale = lcm(*(Fraction(c).denominator for c in kernel))
            kernel = tuple(int(Fraction(c) * scale) for c in kernel)
        zero = tuple(0 for _ in range(matrix.dim))
        missed = next(
            basis
            for basis in _basis_vectors(matrix.dim)
            if matrix.solve(basis) is None
        )
        return MapClassification(NO, NO, collision=(zero, kernel), missed=missed)
    if isinstance(domain, IntegerVector) and abs(det) != 1:
        inv = matrix.inverse()
        missed = next(
            basis
            for j, basis in enumerate(_basis_vectors(matrix.dim))
            if any(Fraction(inv.rows[i][j]).denominator != 1 for i in range(matrix.dim))
        )
        return MapClassification(YES, NO, missed=missed)
    return MapClassification(YES, YES)


def _basis_vectors(dim: int):
    for i in range(dim):
        yield tuple(1 if j == i else 0 for j in range(dim))


@lru_cache(maxsize=None)
def classify(step: StepMap) -> MapClassification:
    """Decide injectivity/surjectivity: exhaustively on finite spaces,
    from coefficients or determinants on the symbolic families."""
    if is_finite(step.domain):
        return _classify_exhaustive(step)
    rule = _normal_form(step.rule, step.domain)
    if isinstance(rule, AffineInt):
        if rule.a == 0:
            return MapClassification(NO, NO, collision=(0, 1), missed=rule.b + 1)
        if rule.a in (1, -1):
            return MapClassification(YES, YES)
        return MapClassification(YES, NO, missed=rule.b + 1)
    if isinstance(rule, MatrixLinear):
        return _classify_matrix(rule.matrix, step.domain)
    if isinstance(rule, MonoidTranslate):
        if rule.monoid.is_group:
            return MapClassification(YES, YES)
        return MapClassification(UNDECIDED, UNDECIDED)
    return MapClassification(UNDECIDED, UNDECIDED)


@dataclass(frozen=True)
class InverseWitness:
    """An inverse map: two-sided when bijective, right inverse otherwise."""

    kind: str  # "two_sided" | "right"
    inverse: StepMap


def invert(step: StepMap) -> InverseWitness:
    """Construct an inverse witness; requires surjectivity.

    Within the supported families a surjective map is bijective, so the
    result is always the two-sided inverse.
    """
    cls = classify(step)
    if cls.surjective != YES:
        raise NotSurjectiveError(
            f"map is not surjective (missed element: {cls.missed!r})"
            if cls.surjective == NO
            else "surjectivity is undecided for this map"
        )
    if cls.injective != YES:
        raise NotBijectiveError(
            f"surjective but not injective (collision: {cls.collision!r}); "
            "no two-sided inverse exists"
        )
    domain = step.domain
    if isinstance(domain, FiniteEnumerated):
        images = [apply(step, x) for x in range(domain.size)]
        inverse = [0] * domain.size
        for x, y in enumerate(images):
            inverse[y] = x
        return InverseWitness("two_sided", StepMap(domain, Table(tuple(inverse))))
    rule = _normal_form(step.rule, domain)
    if isinstance(rule, ModularAffine):
        p = domain.modulus
        a_inv = mod_inverse(rule.a, p)
        return InverseWitness(
            "two_sided",
            StepMap(domain, ModularAffine(a_inv, (-a_inv * rule.b) % p)),
        )
    if isinstance(rule, AffineInt):
        if rule.a == 1:
            return InverseWitness("two_sided", StepMap(domain, AffineInt(1, -rule.b)))
        return InverseWitness("two_sided", StepMap(domain, AffineInt(-1, rule.b)))
    if isinstance(rule, MatrixLinear):
        return InverseWitness(
            "two_sided", StepMap(domain, MatrixLinear(rule.matrix.inverse()))
        )
    raise RuleError(f"no inverse construction for rule {step.rule!r}")


def eval_anywhere(
    sys: AutonomousSystem,
    t0: MultiIndex,
    x0: State,
    t: MultiIndex,
    *,
    report: CompatibilityReport | None = None,
    unsafe: bool = False,
    limits: Limits = Limits(),
) -> State:
    """Solution value at any lattice point, for bijective compatible systems.

    Signed exponents run the inverse maps, so the solution is defined on the
    whole lattice, not just the forward cone.
    """
    if t0.dim != sys.m or t.dim != sys.m:
        raise DimensionMismatchError("index dimension does not match the system")
    for alpha, step in enumerate(sys.maps, start=1):
        cls = classify(step)
        if not (cls.injective == YES and cls.surjective == YES):
            raise NotBijectiveError(
                f"map on axis {alpha} is not bijective: {cls}"
            )
    resolve_compatibility(sys, report, unsafe)
    if not contains(sys.space, x0):
        raise StateDomainError(f"state {x0!r} outside {sys.space!r}")
    x = x0
    for alpha in range(sys.m, 0, -1):
        delta = t[alpha] - t0[alpha]
        if abs(delta) > limits.exponent_cap:
            raise CapExceededError(
                f"exponent {delta} on axis {alpha} exceeds cap {limits.exponent_cap}"
            )
        x = iterate_signed(sys.maps[alpha - 1], delta, x)
    return x


Evaluator = Callable[[MultiIndex], State]


@dataclass(frozen=True)
class NonUniquePair:
    """Two distinct backward extensions built from a collision pair.

    Both evaluators satisfy the recurrence on {t >= base}, both take the
    shared image value at t0, and they differ at base = t0 - 1 on the chosen
    axis (their seeds p and q).
    """

    p: State
    q: State
    shared_value: State
    base: MultiIndex
    eval_p: Evaluator
    eval_q: Evaluator


@dataclass(frozen=True)
class UniqueExtension:
    """The single backward extension through the unique preimage of x0."""

    preimage: State
    base: MultiIndex
    evaluate: Evaluator


@dataclass(frozen=True)
class NoExtension:
    """x0 has no preimage on the chosen axis, so no extension exists."""

    x0: State
    axis: int


BackwardResult = NonUniquePair | UniqueExtension | NoExtension


def backward_extension_pair(
    sys: AutonomousSystem,
    t0: MultiIndex,
    x0: State,
    alpha0: int,
    *,
    report: CompatibilityReport | None = None,
) -> BackwardResult:
    """Extend one step backward on the chosen axis, or exhibit non-uniqueness.

    Requires a finite state space.  If x0 has no preimage under the chosen
    map the extension does not exist; if the map collapses two states, two
    genuinely different solutions through the shared image are returned; if
    the map is injective the unique extension is returned.
    """
    if not is_finite(sys.space):
        raise StateDomainError("backward extension search needs a finite state space")
    if not 1 <= alpha0 <= sys.m:
        raise DimensionMismatchError(f"axis {alpha0} outside 1..{sys.m}")
    if not contains(sys.space, x0):
        raise StateDomainError(f"state {x0!r} outside {sys.space!r}")
    resolved = resolve_compatibility(sys, report, False)
    step = sys.maps[alpha0 - 1]
    base = t0 - unit(alpha0, sys.m)

    preimages = [x for x in iter_states(sys.space) if apply(step, x) == x0]
    if not preimages:
        return NoExtension(x0, alpha0)

    cls = classify(step)
    if cls.injective == NO:
        p, q = cls.collision
        shared = apply(step, p)

        def make(seed: State) -> Evaluator:
            return lambda t: _forward_from(sys, base, seed, t, resolved)

        return NonUniquePair(p, q, shared, base, make(p), make(q))

    seed = preimages[0]
    return UniqueExtension(
        seed, base, lambda t: _forward_from(sys, base, seed, t, resolved)
    )


def _forward_from(sys, base, seed, t, report):
    from .autonomous import eval_forward

    return eval_forward(sys, base, seed, t, report=report)
