"""State spaces, self-maps on them, and exact map algebra.

A :class:`StepMap` is one self-map of a state space, given by a rule from a
small set of closed families: a finite lookup table, an integer affine map,
a modular affine map, an exact matrix, or translation by a monoid element
under a declared action.  Within a family, composition and equality are
decided symbolically; on finite spaces they are decided exhaustively; in the
remaining cases equality can only be sampled, and results say so.

Every operation is pure and every value immutable, so concurrent use needs
no coordination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, singledispatch
from typing import Any, Iterator, Sequence

from .errors import (
    NotBijectiveError,
    RuleError,
    StateDomainError,
    UndecidableEqualityError,
)
from .exact import is_prime
from .matrices import Matrix
from .monoids import (
    Action,
    AdditiveSelfAction,
    FiniteAction,
    FiniteMonoid,
    IntegerAdditive,
    MatrixMonoid,
    MatrixVectorAction,
    Monoid,
    RationalMultiplicative,
    ScalingAction,
)

State = Any


# -- state spaces ------------------------------------------------------------

@dataclass(frozen=True)
class FiniteEnumerated:
    """States are the labels 0..size-1."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise RuleError("finite space needs at least one state")


@dataclass(frozen=True)
class IntegerLine:
    """States are the integers."""


@dataclass(frozen=True)
class IntegerVector:
    """States are integer vectors of a fixed dimension."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise RuleError("vector dimension must be at least 1")


@dataclass(frozen=True)
class ModularLine:
    """States are residues 0..modulus-1."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise RuleError("modulus must be at least 2")


@dataclass(frozen=True)
class RationalVector:
    """States are exact rational vectors of a fixed dimension."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise RuleError("vector dimension must be at least 1")


@dataclass(frozen=True)
class ModularVector:
    """States are residue vectors mod a prime, so matrices act over a field."""

    dim: int
    modulus: int

    def __post_init__(self):
        if self.dim < 1:
            raise RuleError("vector dimension must be at least 1")
        if not is_prime(self.modulus):
            raise RuleError(f"vector modulus {self.modulus} must be prime")


StateSpace = Any  # one of the kinds above, or an AugmentedSpace from the timed module


@singledispatch
def contains(space, x: State) -> bool:
    """Whether x is a state of the space."""
    raise RuleError(f"unknown state space {space!r}")


@contains.register
def _(space: FiniteEnumerated, x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < space.size


@contains.register
def _(space: IntegerLine, x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@contains.register
def _(space: IntegerVector, x) -> bool:
    return (
        isinstance(x, tuple)
        and len(x) == space.dim
        and all(isinstance(c, int) and not isinstance(c, bool) for c in x)
    )


@contains.register
def _(space: ModularLine, x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < space.modulus


@contains.register
def _(space: RationalVector, x) -> bool:
    return (
        isinstance(x, tuple)
        and len(x) == space.dim
        and all(isinstance(c, (int, Fraction)) and not isinstance(c, bool) for c in x)
    )


@contains.register
def _(space: ModularVector, x) -> bool:
    return (
        isinstance(x, tuple)
        and len(x) == space.dim
        and all(isinstance(c, int) and 0 <= c < space.modulus for c in x)
    )


@singledispatch
def is_finite(space) -> bool:
    return False


@is_finite.register(FiniteEnumerated)
@is_finite.register(ModularLine)
@is_finite.register(ModularVector)
def _(space) -> bool:
    return True


@singledispatch
def space_size(space) -> int:
    raise RuleError(f"{space!r} is not finite")


@space_size.register
def _(space: FiniteEnumerated) -> int:
    return space.size


@space_size.register
def _(space: ModularLine) -> int:
    return space.modulus


@space_size.register
def _(space: ModularVector) -> int:
    return space.modulus**space.dim


@singledispatch
def iter_states(space) -> Iterator[State]:
    """Canonical enumeration of a finite space's states."""
    raise RuleError(f"{space!r} is not enumerable")


@iter_states.register
def _(space: FiniteEnumerated) -> Iterator[State]:
    return iter(range(space.size))


@iter_states.register
def _(space: ModularLine) -> Iterator[State]:
    return iter(range(space.modulus))


@iter_states.register
def _(space: ModularVector) -> Iterator[State]:
    return iter(itertools.product(range(space.modulus), repeat=space.dim))


@singledispatch
def default_state(space) -> State:
    raise RuleError(f"no default state for {space!r}")


@default_state.register(FiniteEnumerated)
@default_state.register(IntegerLine)
@default_state.register(ModularLine)
def _(space) -> State:
    return 0


@default_state.register(IntegerVector)
@default_state.register(RationalVector)
def _(space) -> State:
    return (0,) * space.dim


@default_state.register
def _(space: ModularVector) -> State:
    return (0,) * space.dim


def probe_states(space) -> list[State]:
    """A deterministic spanning probe set for sample-style comparisons.

    For scalar lines the probes distinguish any two distinct affine maps;
    for vector spaces they span, so they distinguish any two linear maps.
    """
    if isinstance(space, (FiniteEnumerated, ModularLine, ModularVector)):
        return list(iter_states(space))
    if isinstance(space, IntegerLine):
        return [0, 1]
    if isinstance(space, (IntegerVector, RationalVector)):
        zero = (0,) * space.dim
        basis = [
            tuple(1 if i == j else 0 for j in range(space.dim))
            for i in range(space.dim)
        ]
        return [zero, *basis]
    raise RuleError(f"no probe states for {space!r}")


# -- rules -------------------------------------------------------------------

@dataclass(frozen=True)
class Table:
    """Total lookup table over a finite enumerated space."""

    images: tuple[int, ...]

    def __init__(self, images: Sequence[int]):
        object.__setattr__(self, "images", tuple(int(v) for v in images))

    def image(self, domain, x):
        return self.images[x]


@dataclass(frozen=True)
class AffineInt:
    """x -> a*x + b on the integer line."""

    a: int
    b: int

    def image(self, domain, x):
        return self.a * x + self.b


@dataclass(frozen=True)
class ModularAffine:
    """x -> (a*x + b) mod p on a modular line."""

    a: int
    b: int

    def image(self, domain, x):
        return (self.a * x + self.b) % domain.modulus


@dataclass(frozen=True)
class MatrixLinear:
    """x -> A x on a vector space, with A exact over Q or Z_p."""

    matrix: Matrix

    def image(self, domain, x):
        return self.matrix.apply(x)


@dataclass(frozen=True)
class MonoidTranslate:
    """x -> phi(g, x) for a fixed monoid element g under a declared action."""

    monoid: Monoid
    element: Any
    action: Action

    def image(self, domain, x):
        return self.action.apply(self.element, x)


@dataclass(frozen=True)
class Composed:
    """outer after inner; only appears when composition has no closed form."""

    outer: Any
    inner: Any

    def image(self, domain, x):
        return self.outer.image(domain, self.inner.image(domain, x))


Rule = Any


# -- step maps ---------------------------------------------------------------

def _validate_rule(domain, rule) -> None:
    if isinstance(rule, Table):
        if not isinstance(domain, FiniteEnumerated):
            raise RuleError("table rules need a finite enumerated space")
        if len(rule.images) != domain.size:
            raise RuleError(
                f"table length {len(rule.images)} != space size {domain.size}"
            )
        for v in rule.images:
            if not 0 <= v < domain.size:
                raise RuleError(f"table image {v} outside 0..{domain.size - 1}")
    elif isinstance(rule, AffineInt):
        if not isinstance(domain, IntegerLine):
            raise RuleError("integer affine rules need the integer line")
    elif isinstance(rule, ModularAffine):
        if not isinstance(domain, ModularLine):
            raise RuleError("modular affine rules need a modular line")
        if not (0 <= rule.a < domain.modulus and 0 <= rule.b < domain.modulus):
            raise RuleError("modular affine coefficients must be reduced residues")
    elif isinstance(rule, MatrixLinear):
        mat = rule.matrix
        if isinstance(domain, (IntegerVector, RationalVector)):
            if mat.modulus is not None:
                raise RuleError("modular matrix on a non-modular space")
            if mat.dim != domain.dim:
                raise RuleError(f"matrix dim {mat.dim} != space dim {domain.dim}")
            if isinstance(domain, IntegerVector) and any(
                not isinstance(e, int) for row in mat.rows for e in row
            ):
                raise RuleError("integer vector space needs integer matrix entries")
        elif isinstance(domain, ModularVector):
            if mat.modulus != domain.modulus or mat.dim != domain.dim:
                raise RuleError("matrix modulus or dimension does not match space")
        else:
            raise RuleError("matrix rules need a vector space")
    elif isinstance(rule, MonoidTranslate):
        if not rule.monoid.contains(rule.element):
            raise RuleError(f"element {rule.element!r} not in the declared monoid")
        act = rule.action
        if isinstance(act, AdditiveSelfAction):
            if not isinstance(rule.monoid, IntegerAdditive) or not isinstance(
                domain, IntegerLine
            ):
                raise RuleError("additive self-action needs (Z, +) on the integer line")
        elif isinstance(act, ScalingAction):
            if not isinstance(rule.monoid, RationalMultiplicative) or not (
                isinstance(domain, RationalVector) and domain.dim == act.dim
            ):
                raise RuleError("scaling action needs (Q+, *) on a rational vector space")
        elif isinstance(act, MatrixVectorAction):
            if not (
                isinstance(rule.monoid, MatrixMonoid)
                and rule.monoid.dim == act.dim
                and rule.monoid.modulus == act.modulus
            ):
                raise RuleError("matrix action must match its matrix monoid")
            ok = (
                isinstance(domain, RationalVector)
                and act.modulus is None
                and domain.dim == act.dim
            ) or (
                isinstance(domain, ModularVector)
                and act.modulus == domain.modulus
                and domain.dim == act.dim
            )
            if not ok:
                raise RuleError("matrix action does not match the state space")
        elif isinstance(act, FiniteAction):
            if not isinstance(rule.monoid, FiniteMonoid):
                raise RuleError("action tables need a finite monoid")
            if not isinstance(domain, FiniteEnumerated) or len(act.table[0]) != domain.size:
                raise RuleError("action table width must equal the space size")
            act.check_axioms(rule.monoid)
        else:
            raise RuleError(f"unknown action {act!r}")
    elif isinstance(rule, Composed):
        _validate_rule(domain, rule.outer)
        _validate_rule(domain, rule.inner)
    elif hasattr(rule, "validate_for"):
        rule.validate_for(domain)
    else:
        raise RuleError(f"unknown rule {rule!r}")


@dataclass(frozen=True)
class StepMap:
    """One self-map of a state space."""

    domain: StateSpace
    rule: Rule

    def __post_init__(self):
        _validate_rule(self.domain, self.rule)


def apply(step: StepMap, x: State) -> State:
    """Apply the map once; the input must lie in the map's space."""
    if not contains(step.domain, x):
        raise StateDomainError(f"state {x!r} outside {step.domain!r}")
    return step.rule.image(step.domain, x)


# -- composition and normal forms ---------------------------------------------

def _normal_form(rule: Rule, domain) -> Rule:
    """Rewrite a rule into a closed symbolic family when one exists."""
    if isinstance(rule, MonoidTranslate):
        if isinstance(rule.action, AdditiveSelfAction):
            return AffineInt(1, rule.element)
        if isinstance(rule.action, ScalingAction):
            g = Fraction(rule.element)
            scale = int(g) if g.denominator == 1 else g
            eye = [
                [scale if i == j else 0 for j in range(rule.action.dim)]
                for i in range(rule.action.dim)
            ]
            return MatrixLinear(Matrix(eye))
        if isinstance(rule.action, MatrixVectorAction):
            return MatrixLinear(rule.element)
        return rule
    if isinstance(rule, Composed):
        outer = _normal_form(rule.outer, domain)
        inner = _normal_form(rule.inner, domain)
        closed = _compose_closed(outer, inner, domain)
        return closed if closed is not None else Composed(outer, inner)
    return rule


def _compose_closed(outer: Rule, inner: Rule, domain) -> Rule | None:
    """outer after inner, within one closed family; None when not closed."""
    if isinstance(outer, Table) and isinstance(inner, Table):
        return Table(tuple(outer.images[v] for v in inner.images))
    if isinstance(outer, AffineInt) and isinstance(inner, AffineInt):
        return AffineInt(outer.a * inner.a, outer.a * inner.b + outer.b)
    if isinstance(outer, ModularAffine) and isinstance(inner, ModularAffine):
        p = domain.modulus
        return ModularAffine(outer.a * inner.a % p, (outer.a * inner.b + outer.b) % p)
    if isinstance(outer, MatrixLinear) and isinstance(inner, MatrixLinear):
        return MatrixLinear(outer.matrix @ inner.matrix)
    if (
        isinstance(outer, MonoidTranslate)
        and isinstance(inner, MonoidTranslate)
        and outer.monoid == inner.monoid
        and outer.action == inner.action
    ):
        return MonoidTranslate(
            outer.monoid, outer.monoid.op(outer.element, inner.element), outer.action
        )
    return None


def compose(outer: StepMap, inner: StepMap) -> StepMap:
    """The map 'outer after inner' on their shared space."""
    if outer.domain != inner.domain:
        raise RuleError("composed maps must share one state space")
    o = _normal_form(outer.rule, outer.domain)
    i = _normal_form(inner.rule, inner.domain)
    closed = _compose_closed(o, i, outer.domain)
    return StepMap(outer.domain, closed if closed is not None else Composed(o, i))


# -- iteration ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _cycle_prefix(step: StepMap, x: State) -> tuple[tuple[State, ...], int]:
    """Orbit of x as (visited states, index where the cycle re-enters)."""
    seen: dict[State, int] = {}
    seq: list[State] = []
    current = x
    while current not in seen:
        seen[current] = len(seq)
        seq.append(current)
        current = apply(step, current)
    return tuple(seq), seen[current]


def iterate_mode(step: StepMap) -> str:
    """How n-fold application is computed for this rule family."""
    rule = _normal_form(step.rule, step.domain)
    if isinstance(rule, (AffineInt, ModularAffine, MatrixLinear)):
        return "binary"
    if is_finite(step.domain):
        return "cycle"
    return "plain"


def iterate(step: StepMap, n: int, x: State) -> State:
    """n-fold application; n = 0 is the identity."""
    if n < 0:
        raise RuleError("iterate needs n >= 0; use iterate_signed for negatives")
    if not contains(step.domain, x):
        raise StateDomainError(f"state {x!r} outside {step.domain!r}")
    if n == 0:
        return x
    rule = _normal_form(step.rule, step.domain)
    if isinstance(rule, AffineInt):
        a, b = _affine_power(rule.a, rule.b, n)
        return a * x + b
    if isinstance(rule, ModularAffine):
        p = step.domain.modulus
        a, b = _affine_power_mod(rule.a, rule.b, n, p)
        return (a * x + b) % p
    if isinstance(rule, MatrixLinear):
        return rule.matrix.pow(n).apply(x)
    if is_finite(step.domain):
        seq, loop_start = _cycle_prefix(step, x)
        if n < len(seq):
            return seq[n]
        cycle_len = len(seq) - loop_start
        return seq[loop_start + (n - loop_start) % cycle_len]
    for _ in range(n):
        x = apply(step, x)
    return x


def _affine_power(a: int, b: int, n: int) -> tuple[int, int]:
    """Coefficients of the n-fold composite of x -> a*x + b."""
    ra, rb = 1, 0
    ba, bb = a, b
    while n:
        if n & 1:
            ra, rb = ra * ba, ra * bb + rb
        if n > 1:
            ba, bb = ba * ba, ba * bb + bb
        n >>= 1
    return ra, rb


def _affine_power_mod(a: int, b: int, n: int, p: int) -> tuple[int, int]:
    ra, rb = 1, 0
    ba, bb = a % p, b % p
    while n:
        if n & 1:
            ra, rb = ra * ba % p, (ra * bb + rb) % p
        if n > 1:
            ba, bb = ba * ba % p, (ba * bb + bb) % p
        n >>= 1
    return ra, rb


def iterate_signed(step: StepMap, k: int, x: State) -> State:
    """Signed iteration: negative powers run the inverse map."""
    if k >= 0:
        return iterate(step, k, x)
    from .extension import classify, invert

    cls = classify(step)
    if not (cls.injective == "yes" and cls.surjective == "yes"):
        raise NotBijectiveError(
            f"negative power of a non-bijective map (classification: {cls})"
        )
    return iterate(invert(step).inverse, -k, x)


# -- equality ----------------------------------------------------------------

@dataclass(frozen=True)
class MapsEqualResult:
    """Outcome of a map comparison, with how it was decided.

    ``decided`` is "exhaustive", "symbolic", or "sampled"; a sampled equality
    verdict is not conclusive and is labeled so in reports.  When unequal,
    ``witness`` is a state on which the two maps differ.
    """

    equal: bool
    decided: str
    witness: State | None = None


def _exhaustive_compare(f: StepMap, g: StepMap) -> MapsEqualResult:
    for x in iter_states(f.domain):
        fx, gx = apply(f, x), apply(g, x)
        if fx != gx:
            return MapsEqualResult(False, "exhaustive", x)
    return MapsEqualResult(True, "exhaustive")


def _symbolic_compare(f_rule: Rule, g_rule: Rule, domain) -> MapsEqualResult | None:
    """Conclusive comparison within one closed family, else None."""
    if isinstance(f_rule, AffineInt) and isinstance(g_rule, AffineInt):
        if f_rule == g_rule:
            return MapsEqualResult(True, "symbolic")
        witness = 0 if f_rule.b != g_rule.b else 1
        return MapsEqualResult(False, "symbolic", witness)
    if isinstance(f_rule, MatrixLinear) and isinstance(g_rule, MatrixLinear):
        if f_rule.matrix == g_rule.matrix:
            return MapsEqualResult(True, "symbolic")
        fm, gm = f_rule.matrix, g_rule.matrix
        col = next(
            j
            for j in range(fm.dim)
            for i in range(fm.dim)
            if fm.rows[i][j] != gm.rows[i][j]
        )
        witness = tuple(1 if j == col else 0 for j in range(fm.dim))
        return MapsEqualResult(False, "symbolic", witness)
    if (
        isinstance(f_rule, MonoidTranslate)
        and isinstance(g_rule, MonoidTranslate)
        and f_rule.monoid == g_rule.monoid
        and f_rule.action == g_rule.action
        and isinstance(f_rule.action, (AdditiveSelfAction, ScalingAction))
    ):
        # both built-in actions are faithful, so elements decide the maps
        if f_rule.element == g_rule.element:
            return MapsEqualResult(True, "symbolic")
        witness = 0 if isinstance(f_rule.action, AdditiveSelfAction) else (
            tuple(1 if j == 0 else 0 for j in range(f_rule.action.dim))
        )
        return MapsEqualResult(False, "symbolic", witness)
    return None


def maps_equal(
    f: StepMap, g: StepMap, sample: Sequence[State] | None = None
) -> MapsEqualResult:
    """Decide whether two maps on one space are equal, with a witness if not.

    Finite enumerated and modular lines are compared pointwise over every
    state.  On infinite spaces the comparison is symbolic within a closed
    rule family; otherwise it falls back to the provided sample and reports
    a non-conclusive "sampled" status.
    """
    if f.domain != g.domain:
        raise RuleError("compared maps must share one state space")
    domain = f.domain
    if isinstance(domain, (FiniteEnumerated, ModularLine)):
        return _exhaustive_compare(f, g)
    f_rule = _normal_form(f.rule, domain)
    g_rule = _normal_form(g.rule, domain)
    symbolic = _symbolic_compare(f_rule, g_rule, domain)
    if symbolic is not None:
        return symbolic
    if isinstance(domain, ModularVector):
        return _exhaustive_compare(f, g)
    if sample is None:
        raise UndecidableEqualityError(
            "maps are not in one closed family on an infinite space; provide a sample"
        )
    for x in sample:
        fx, gx = apply(f, x), apply(g, x)
        if fx != gx:
            return MapsEqualResult(False, "sampled", x)
    return MapsEqualResult(True, "sampled")
