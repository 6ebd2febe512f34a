"""Commutative monoids and their actions on state spaces.

Three built-in infinite monoids (integers under addition, positive rationals
under multiplication, exact matrices under multiplication) plus user-declared
finite monoids given by an operation table.  Finite tables are validated
exhaustively: associativity, commutativity, and a two-sided identity.  The
built-ins satisfy those axioms by construction; consumers record that
assumption instead of re-proving it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import NotInvertibleError, RuleError
from .matrices import Matrix


def combine_power(monoid: "Monoid", element: Any, k: int) -> Any:
    """Generic k-fold combination by repeated squaring; k < 0 needs an inverse."""
    if k < 0:
        element = monoid.inverse(element)
        k = -k
    result = monoid.identity
    base = element
    while k:
        if k & 1:
            result = monoid.op(result, base)
        base = monoid.op(base, base) if k > 1 else base
        k >>= 1
    return result


@dataclass(frozen=True)
class FiniteMonoid:
    """A commutative monoid on labels 0..n-1 given by its operation table."""

    table: tuple[tuple[int, ...], ...]

    def __init__(self, table):
        rows = tuple(tuple(int(v) for v in row) for row in table)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise RuleError("monoid table must be square and nonempty")
        for row in rows:
            for v in row:
                if not 0 <= v < n:
                    raise RuleError(f"monoid table value {v} outside 0..{n - 1}")
        for a in range(n):
            for b in range(a + 1, n):
                if rows[a][b] != rows[b][a]:
                    raise RuleError(f"monoid table not commutative at ({a}, {b})")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                        raise RuleError(
                            f"monoid table not associative at ({a}, {b}, {c})"
                        )
        if self._find_identity(rows) is None:
            raise RuleError("monoid table has no identity element")
        object.__setattr__(self, "table", rows)

    @staticmethod
    def _find_identity(rows) -> int | None:
        n = len(rows)
        for e in range(n):
            if all(rows[e][x] == x for x in range(n)):
                return e
        return None

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return self._find_identity(self.table)  # type: ignore[return-value]

    def contains(self, a: Any) -> bool:
        return isinstance(a, int) and 0 <= a < self.size

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        e = self.identity
        for b in range(self.size):
            if self.table[a][b] == e:
                return b
        raise NotInvertibleError(f"monoid element {a} has no inverse")

    @property
    def is_group(self) -> bool:
        e = self.identity
        return all(any(self.table[a][b] == e for b in range(self.size)) for a in range(self.size))

    def power(self, a: int, k: int) -> int:
        return combine_power(self, a, k)

    def describe(self) -> str:
        return f"finite monoid of size {self.size}"


class IntegerAdditive:
    """The integers under addition."""

    identity = 0
    is_group = True

    def contains(self, a: Any) -> bool:
        return isinstance(a, int) and not isinstance(a, bool)

    def op(self, a: int, b: int) -> int:
        return a + b

    def inverse(self, a: int) -> int:
        return -a

    def power(self, a: int, k: int) -> int:
        return k * a

    def describe(self) -> str:
        return "integers under addition"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntegerAdditive)

    def __hash__(self) -> int:
        return hash(IntegerAdditive)


class RationalMultiplicative:
    """The positive rationals under multiplication."""

    identity = Fraction(1)
    is_group = True

    def contains(self, a: Any) -> bool:
        return isinstance(a, (int, Fraction)) and not isinstance(a, bool) and a > 0

    def op(self, a, b):
        return Fraction(a) * Fraction(b)

    def inverse(self, a):
        return 1 / Fraction(a)

    def power(self, a, k: int):
        return Fraction(a) ** k

    def describe(self) -> str:
        return "positive rationals under multiplication"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalMultiplicative)

    def __hash__(self) -> int:
        return hash(RationalMultiplicative)


@dataclass(frozen=True)
class MatrixMonoid:
    """Square exact matrices of one size under multiplication."""

    dim: int
    modulus: int | None = None

    @property
    def identity(self) -> Matrix:
        return Matrix.identity(self.dim, self.modulus)

    is_group = False  # singular matrices have no inverse

    def contains(self, a: Any) -> bool:
        return isinstance(a, Matrix) and a.dim == self.dim and a.modulus == self.modulus

    def op(self, a: Matrix, b: Matrix) -> Matrix:
        return a @ b

    def inverse(self, a: Matrix) -> Matrix:
        return a.inverse()

    def power(self, a: Matrix, k: int) -> Matrix:
        return a.pow(k)

    def describe(self) -> str:
        mod = f" mod {self.modulus}" if self.modulus is not None else ""
        return f"{self.dim}x{self.dim} matrices{mod} under multiplication"


Monoid = FiniteMonoid | IntegerAdditive | RationalMultiplicative | MatrixMonoid


# -- actions ----------------------------------------------------------------

@dataclass(frozen=True)
class AdditiveSelfAction:
    """g acting on an integer state by addition."""

    def apply(self, g: int, x: int) -> int:
        return g + x

    axioms_assumed = True


@dataclass(frozen=True)
class ScalingAction:
    """A positive rational scaling every component of a vector state."""

    dim: int

    def apply(self, g, v: tuple) -> tuple:
        return tuple(Fraction(g) * Fraction(c) for c in v)

    axioms_assumed = True


@dataclass(frozen=True)
class MatrixVectorAction:
    """A matrix acting on a vector state by multiplication."""

    dim: int
    modulus: int | None = None

    def apply(self, g: Matrix, v: tuple) -> tuple:
        return g.apply(v)

    axioms_assumed = True


@dataclass(frozen=True)
class FiniteAction:
    """Action table: rows indexed by monoid element, columns by state label."""

    table: tuple[tuple[int, ...], ...]

    def __init__(self, table):
        rows = tuple(tuple(int(v) for v in row) for row in table)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise RuleError("action table rows must be nonempty and equal length")
        width = len(rows[0])
        for row in rows:
            for v in row:
                if not 0 <= v < width:
                    raise RuleError(f"action table value {v} outside 0..{width - 1}")
        object.__setattr__(self, "table", rows)

    def apply(self, g: int, x: int) -> int:
        return self.table[g][x]

    axioms_assumed = False

    def check_axioms(self, monoid: FiniteMonoid) -> None:
        """Exhaustively verify both action axioms against the monoid table."""
        if len(self.table) != monoid.size:
            raise RuleError("action table must have one row per monoid element")
        n_states = len(self.table[0])
        e = monoid.identity
        for x in range(n_states):
            if self.table[e][x] != x:
                raise RuleError(f"identity axiom fails at state {x}")
        for a in range(monoid.size):
            for b in range(monoid.size):
                ab = monoid.op(a, b)
                for x in range(n_states):
                    if self.table[ab][x] != self.table[a][self.table[b][x]]:
                        raise RuleError(
                            f"action axiom fails for elements ({a}, {b}) at state {x}"
                        )


Action = AdditiveSelfAction | ScalingAction | MatrixVectorAction | FiniteAction
