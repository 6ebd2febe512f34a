"""Resource limits for enumeration and exponentiation.

Counts explode combinatorially and exact entries grow with the exponent, so
every potentially unbounded routine takes a limit with a desk-scale default.
Modular arithmetic has constant-size entries, which is why its exponent cap
is much larger.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PATH_CAP = 10_000
DEFAULT_VOLUME_CAP = 100_000
DEFAULT_EXPONENT_CAP = 1 << 20
DEFAULT_MODULAR_EXPONENT_CAP = 1 << 62


@dataclass(frozen=True)
class Limits:
    path_cap: int = DEFAULT_PATH_CAP
    volume_cap: int = DEFAULT_VOLUME_CAP
    exponent_cap: int = DEFAULT_EXPONENT_CAP
    modular_exponent_cap: int = DEFAULT_MODULAR_EXPONENT_CAP
