"""Exception hierarchy shared by all modules.

Every error raised on purpose derives from :class:`LatticeRecError`, so the
CLI can map failures onto its documented exit codes.
"""

from __future__ import annotations


class LatticeRecError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(LatticeRecError):
    """Operands have different lattice dimensions."""


class AxisRangeError(LatticeRecError):
    """Axis label outside 1..m."""


class CoordinateOverflowError(LatticeRecError, OverflowError):
    """Lattice coordinate arithmetic left the signed 64-bit range."""


class IncomparableError(LatticeRecError):
    """Endpoints are not ordered componentwise."""


class CapExceededError(LatticeRecError):
    """A path, volume, or exponent limit would be exceeded."""


class StateDomainError(LatticeRecError):
    """A state does not belong to the map's state space."""


class RuleError(LatticeRecError):
    """A map rule is malformed or inconsistent with its state space."""


class UndecidableEqualityError(LatticeRecError):
    """Map equality cannot be decided and no sample was provided."""


class NotBijectiveError(LatticeRecError):
    """A negative power or global evaluation needs a bijective map."""


class NotSurjectiveError(LatticeRecError):
    """Inversion requested for a map that misses part of its codomain."""


class IncompatibleSystemError(LatticeRecError):
    """Evaluation refused because the step maps do not commute."""


class NotInvertibleError(LatticeRecError):
    """A monoid element or matrix has no inverse."""


class NonCommutingError(LatticeRecError):
    """A matrix pair fails the entrywise commutation check."""


class TimeWindowError(LatticeRecError):
    """A time index lies below the domain threshold or outside a rule's window."""


class ConfigError(LatticeRecError):
    """Configuration document failed validation.

    ``problems`` lists every (location, message) pair found, not just the
    first one.
    """

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = list(problems)
        lines = "; ".join(f"{where}: {what}" for where, what in self.problems)
        super().__init__(f"invalid configuration: {lines}")
