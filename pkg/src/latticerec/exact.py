"""Exact scalar helpers: rationals, residues, and their text form.

All arithmetic in this package is exact.  Scalars are either arbitrary
precision integers, reduced :class:`fractions.Fraction` values, or residues
in ``[0, p)`` carried alongside an explicit modulus.  Nothing here touches
floating point.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotInvertibleError, RuleError

Scalar = int | Fraction


def parse_scalar(text: str | int) -> Scalar:
    """Parse ``"p/q"`` or a plain integer into an exact scalar."""
    if isinstance(text, int):
        return text
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        d = int(den)
        if d == 0:
            raise RuleError(f"zero denominator in {text!r}")
        value = Fraction(int(num), d)
    else:
        value = Fraction(int(s))
    if value.denominator == 1:
        return int(value)
    return value


def render_scalar(value: Scalar) -> str | int:
    """Render a scalar for output: integers plain, rationals as ``"p/q"``."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return value


def mod_inverse(a: int, p: int) -> int:
    """Inverse of ``a`` modulo ``p``; raises when none exists."""
    try:
        return pow(a, -1, p)
    except ValueError:
        raise NotInvertibleError(f"{a} has no inverse modulo {p}") from None


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit inputs."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
