"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CogVLCError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CogVLCError, ValueError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(CogVLCError):
    """A design problem has no solution under the given constraints.

    Attributes:
        bound: name of the violated bound.
        details: numeric context (limits and the offending values).
    """

    def __init__(self, message: str, bound: str, **details: float):
        super().__init__(message)
        self.bound = bound
        self.details = details

    def to_record(self) -> dict:
        return {"error": "infeasible", "bound": self.bound, "message": str(self),
                **self.details}


class LayoutError(CogVLCError, ValueError):
    """AP placement cannot be realized in the given hall."""


class ScenarioError(CogVLCError, ValueError):
    """Malformed or invalid scenario document."""
