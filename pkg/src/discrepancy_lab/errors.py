"""Exception types shared across the library.

Every error raised by library code derives from :class:`DiscrepancyLabError`
so callers (and the CLI) can map failures onto exit codes uniformly.
"""


class DiscrepancyLabError(Exception):
    """Base class for all library errors."""


class UsageError(DiscrepancyLabError):
    """Malformed request at the API or CLI surface (exit code 2)."""


class BudgetExceeded(DiscrepancyLabError):
    """A computation would exceed the configured desk-scale budget (exit code 3)."""


class DomainError(DiscrepancyLabError):
    """A mathematical domain violation (exit code 4)."""


class OffsetOutOfRange(DomainError):
    """Dyadic interval offset outside [0, 2^level)."""


class DimensionMismatch(DomainError):
    """Operands live in different ambient dimensions."""


class NotStronglyDistinct(DomainError):
    """Haar product rule inapplicable: two equal levels in one coordinate."""


class EmptyIntersection(DomainError):
    """Haar product rule inapplicable: the boxes are disjoint."""


class UnsupportedDimension(DomainError):
    """Requested dimension outside the supported range {1, 2, 3}."""


class ResolutionTooCoarse(DomainError):
    """A grid resolution too coarse to represent the expression exactly."""


class GammaOutOfRange(DomainError):
    """Riesz-product weight outside (0, 1)."""


class ParameterDomain(DomainError):
    """Riesz-product parameters outside their admissible region."""


class ZeroTestFunction(DomainError):
    """Duality certificate requested for a test function with zero L1 norm."""


class NotConnected(DomainError):
    """Graph operation that requires a connected graph."""
