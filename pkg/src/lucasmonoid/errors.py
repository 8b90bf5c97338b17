"""Exception types shared across the package."""


class LucasMonoidError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LucasMonoidError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation was requested exactly at a pole."""


class MembershipError(DomainError):
    """An integer that is not a monoid element was passed where one is required."""


class FactorizationError(LucasMonoidError, RuntimeError):
    """The integer factorization backend failed to produce a certified result."""


class ResourceCapError(LucasMonoidError, RuntimeError):
    """An enumeration would exceed the configured element cap."""


class ConfigError(LucasMonoidError, ValueError):
    """An evaluation configuration cannot meet its own error targets."""


class ToleranceError(LucasMonoidError, RuntimeError):
    """A verification run violated its embedded numerical tolerance."""
