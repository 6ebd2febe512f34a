"""Exact square matrices over Q or over Z_p (p prime).

Entries over Q are Python ints or Fractions; entries mod p are residues in
``[0, p)``.  Powers use repeated squaring, inverses use Gauss-Jordan
elimination, everything stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import NotInvertibleError, RuleError
from .exact import Scalar, is_prime, mod_inverse

Entry = Scalar
Vector = tuple[Entry, ...]


class Matrix:
    """An immutable exact square matrix, optionally modulo a prime."""

    __slots__ = ("rows", "modulus")

    def __init__(self, rows: Sequence[Sequence[Entry]], modulus: int | None = None):
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise RuleError("matrix must be square and nonempty")
        if modulus is not None:
            if modulus < 2 or not is_prime(modulus):
                raise RuleError(f"matrix modulus {modulus} must be prime")
            fixed = tuple(tuple(int(e) % modulus for e in r) for r in rows)
        else:
            for r in rows:
                for e in r:
                    if not isinstance(e, (int, Fraction)):
                        raise RuleError(f"matrix entry {e!r} is not exact")
            fixed = tuple(tuple(e for e in r) for r in rows)
        object.__setattr__(self, "rows", fixed)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.modulus == other.modulus and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.rows, self.modulus))

    def __repr__(self) -> str:
        mod = f", mod {self.modulus}" if self.modulus is not None else ""
        return f"Matrix({[list(r) for r in self.rows]}{mod})"

    def _reduce(self, value: Entry) -> Entry:
        if self.modulus is not None:
            return int(value) % self.modulus
        return value

    def _check_peer(self, other: "Matrix") -> None:
        if self.dim != other.dim or self.modulus != other.modulus:
            raise RuleError("matrix dimensions or moduli differ")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_peer(other)
        n = self.dim
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = sum(self.rows[i][k] * other.rows[k][j] for k in range(n))
                row.append(self._reduce(acc))
            rows.append(row)
        return Matrix(rows, self.modulus)

    def apply(self, vector: Sequence[Entry]) -> Vector:
        if len(vector) != self.dim:
            raise RuleError(f"vector length {len(vector)} != matrix dim {self.dim}")
        return tuple(
            self._reduce(sum(self.rows[i][k] * vector[k] for k in range(self.dim)))
            for i in range(self.dim)
        )

    @staticmethod
    def identity(n: int, modulus: int | None = None) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], modulus)

    def det(self) -> Entry:
        """Determinant by fraction-free-ish Gaussian elimination."""
        n = self.dim
        work = [list(r) for r in self.rows]
        if self.modulus is None:
            work = [[Fraction(e) for e in r] for r in work]
        sign = 1
        det: Entry = 1
        for col in range(n):
            pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot_row is None:
                return self._reduce(0)
            if pivot_row != col:
                work[col], work[pivot_row] = work[pivot_row], work[col]
                sign = -sign
            pivot = work[col][col]
            det = self._reduce(det * pivot)
            inv = (
                mod_inverse(pivot, self.modulus)
                if self.modulus is not None
                else 1 / pivot
            )
            for r in range(col + 1, n):
                factor = self._reduce(work[r][col] * inv)
                if factor == 0:
                    continue
                for c in range(col, n):
                    work[r][c] = self._reduce(work[r][c] - factor * work[col][c])
        det = det * sign
        if self.modulus is not None:
            det = det % self.modulus
        elif isinstance(det, Fraction) and det.denominator == 1:
            det = int(det)
        return det

    def inverse(self) -> "Matrix":
        """Two-sided inverse; raises for singular matrices."""
        n = self.dim
        work = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        if self.modulus is None:
            work = [[Fraction(e) for e in row] for row in work]
        for col in range(n):
            pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
            if pivot_row is None:
                raise NotInvertibleError("matrix is singular")
            work[col], work[pivot_row] = work[pivot_row], work[col]
            pivot = work[col][col]
            inv = (
                mod_inverse(pivot, self.modulus)
                if self.modulus is not None
                else 1 / pivot
            )
            work[col] = [self._reduce(e * inv) for e in work[col]]
            for r in range(n):
                if r == col or work[r][col] == 0:
                    continue
                factor = work[r][col]
                work[r] = [
                    self._reduce(a - factor * b) for a, b in zip(work[r], work[col])
                ]
        rows = [row[n:] for row in work]
        if self.modulus is None:
            rows = [
                [int(e) if e.denominator == 1 else e for e in row] for row in rows
            ]
        return Matrix(rows, self.modulus)

    def pow(self, k: int) -> "Matrix":
        """k-th power by repeated squaring; negative k inverts first."""
        base = self
        if k < 0:
            base = self.inverse()
            k = -k
        result = Matrix.identity(self.dim, self.modulus)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def solve(self, target: Sequence[Entry]) -> Vector | None:
        """A solution x of A x = target, or None when none exists."""
        n = self.dim
        if len(target) != n:
            raise RuleError("target length mismatch")
        work = [list(self.rows[i]) + [target[i]] for i in range(n)]
        if self.modulus is None:
            work = [[Fraction(e) for e in row] for row in work]
        else:
            work = [[int(e) % self.modulus for e in row] for row in work]
        pivots: list[int] = []
        row = 0
        for col in range(n):
            pivot_row = next((r for r in range(row, n) if work[r][col] != 0), None)
            if pivot_row is None:
                continue
            work[row], work[pivot_row] = work[pivot_row], work[row]
            pivot = work[row][col]
            inv = (
                mod_inverse(pivot, self.modulus)
                if self.modulus is not None
                else 1 / pivot
            )
            work[row] = [self._reduce(e * inv) for e in work[row]]
            for r in range(n):
                if r != row and work[r][col] != 0:
                    factor = work[r][col]
                    work[r] = [
                        self._reduce(a - factor * b) for a, b in zip(work[r], work[row])
                    ]
            pivots.append(col)
            row += 1
        for r in range(row, n):
            if work[r][n] != 0:
                return None
        solution: list[Entry] = [0] * n
        for r, col in enumerate(pivots):
            value = work[r][n]
            if self.modulus is None and isinstance(value, Fraction) and value.denominator == 1:
                value = int(value)
            solution[col] = value
        return tuple(solution)

    def kernel_vector(self) -> Vector | None:
        """A nonzero vector with A v = 0, or None when A is injective."""
        n = self.dim
        work = [list(r) for r in self.rows]
        if self.modulus is None:
            work = [[Fraction(e) for e in row] for row in work]
        else:
            work = [[int(e) % self.modulus for e in row] for row in work]
        pivots: dict[int, int] = {}
        row = 0
        for col in range(n):
            pivot_row = next((r for r in range(row, n) if work[r][col] != 0), None)
            if pivot_row is None:
                continue
            work[row], work[pivot_row] = work[pivot_row], work[row]
            pivot = work[row][col]
            inv = (
                mod_inverse(pivot, self.modulus)
                if self.modulus is not None
                else 1 / pivot
            )
            work[row] = [self._reduce(e * inv) for e in work[row]]
            for r in range(n):
                if r != row and work[r][col] != 0:
                    factor = work[r][col]
                    work[r] = [
                        self._reduce(a - factor * b) for a, b in zip(work[r], work[row])
                    ]
            pivots[col] = row
            row += 1
        free = next((c for c in range(n) if c not in pivots), None)
        if free is None:
            return None
        vec: list[Entry] = [0] * n
        vec[free] = 1
        for col, r in pivots.items():
            value = -work[r][free]
            vec[col] = self._reduce(value)
        if self.modulus is None:
            vec = [int(e) if isinstance(e, Fraction) and e.denominator == 1 else e for e in vec]
        return tuple(vec)
