"""Shifted Waring Lab: Custom Exception Hierarchy.

All application-specific exceptions inherit from ShiftLabError.
Each subsystem has its own exception class for precise error handling; the CLI maps
them onto exit codes.
"""

from __future__ import annotations

from typing import Any


class ShiftLabError(Exception):
    """Base exception for all lab errors."""

    def __init__(self, message: str, *, details: dict[str, Any] | None = None) -> None:
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


# --- Configuration Errors ---


class ConfigurationError(ShiftLabError):
    """Invalid or missing configuration (schema violation, unreadable file)."""


class InstanceError(ShiftLabError):
    """An instance violates one of the hypotheses on s, k or theta."""

    def __init__(
        self,
        message: str,
        *,
        hypothesis: str = "",
        details: dict[str, Any] | None = None,
    ) -> None:
        self.hypothesis = hypothesis
        super().__init__(message, details=details)


# --- Numeric Errors ---


class NumericError(ShiftLabError):
    """Base error for ball and rational arithmetic failures."""


class BallParseError(NumericError):
    """A decimal or rational literal could not be parsed."""

    def __init__(self, text: str, *, details: dict[str, Any] | None = None) -> None:
        self.text = text
        super().__init__(f"Malformed numeric literal: {text!r}", details=details)


class BallDomainError(NumericError):
    """Operation undefined on the enclosed values (e.g. root of a non-positive ball)."""


# --- Undecided Errors ---


class UndecidedError(ShiftLabError):
    """A comparison stayed Unknown at the precision cap."""


class NearestIntegerUndecidedError(UndecidedError):
    """The nearest integer to an enclosure could not be decided."""

    def __init__(
        self,
        candidates: tuple[int, int],
        *,
        details: dict[str, Any] | None = None,
    ) -> None:
        self.candidates = candidates
        super().__init__(
            f"Nearest integer undecided between {candidates[0]} and {candidates[1]}",
            details=details,
        )


class WindowUndecidedError(UndecidedError):
    """The diagonal window could not be bounded at the precision cap."""


# --- Precondition Errors ---


class PreconditionError(ShiftLabError):
    """An operation was called outside its documented domain."""


class InfeasibleBoxError(PreconditionError):
    """No integer vector in the box satisfies the sum constraint."""


# --- Budget Errors ---


class SearchBudgetExceededError(ShiftLabError):
    """The window holds more candidates than the configured budget."""

    def __init__(
        self,
        estimate: int,
        budget: int,
        *,
        details: dict[str, Any] | None = None,
    ) -> None:
        self.estimate = estimate
        self.budget = budget
        super().__init__(
            f"Window holds {estimate} candidates, budget is {budget}",
            details=details,
        )


# --- Invariant Errors ---


class InvariantViolationError(ShiftLabError):
    """A property guaranteed by the certificate or by exhaustive search failed."""


class GapInconsistencyError(InvariantViolationError):
    """A grid point inside the certified gap has a solution."""


class PhaseMonotonicityError(InvariantViolationError):
    """Solution density decreased as the tolerance exponent grew."""
