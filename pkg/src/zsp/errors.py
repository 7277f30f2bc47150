"""Exception types shared across the package."""
from __future__ import annotations


class ZspError(Exception):
    """Base class for all package errors."""


class InputError(ZspError, ValueError):
    """Malformed or inconsistent user input."""


class StructuralError(InputError):
    """An element does not conform to its group (wrong arity or range)."""


class DegenerateSix(ZspError):
    """The six values built from (c, d) are not pairwise distinct and non-zero."""


class NoCompleteMapping(ZspError):
    """The group has exactly one involution, so no complete mapping pair exists."""


class PreconditionViolated(ZspError):
    """An operation was called outside its stated domain."""


class ConstructionUnavailable(ZspError):
    """The requested construction does not apply to this group or request."""


class InternalExhaustion(ZspError):
    """A search that is guaranteed to succeed ran out of budget."""


class CapabilityExceeded(ZspError):
    """The request is valid but beyond the configured search bounds."""


class Unsupported(ZspError):
    """The request lies outside every construction this package implements."""


class Unrealizable(ZspError):
    """The request is provably impossible."""

    def __init__(self, message: str, reason: str = "refuted"):
        super().__init__(message)
        self.reason = reason


class FloorViolation(ZspError):
    """Part sizes fall below the group's known floor.

    ``status`` is ``"refuted"`` when the request is provably impossible and
    ``"open"`` when no proof either way is known.
    """

    def __init__(self, message: str, status: str):
        super().__init__(message)
        self.status = status


class FeasibilityError(ZspError):
    """A labeling precondition failed; ``condition`` names which one."""

    def __init__(self, message: str, condition: str = ""):
        super().__init__(message)
        self.condition = condition or message
