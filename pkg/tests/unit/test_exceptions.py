"""Tests for src.core.exceptions: Exception hierarchy and metadata."""

from __future__ import annotations

from src.core.exceptions import (
    BallDomainError,
    BallParseError,
    ConfigurationError,
    GapInconsistencyError,
    InfeasibleBoxError,
    InstanceError,
    InvariantViolationError,
    NearestIntegerUndecidedError,
    NumericError,
    PhaseMonotonicityError,
    PreconditionError,
    SearchBudgetExceededError,
    ShiftLabError,
    UndecidedError,
    WindowUndecidedError,
)


class TestExceptionHierarchy:
    """Verify the inheritance chain is correct."""

    def test_base_exception(self) -> None:
        exc = ShiftLabError("test", details={"key": "val"})
        assert str(exc) == "test"
        assert exc.message == "test"
        assert exc.details == {"key": "val"}

    def test_default_details(self) -> None:
        assert ConfigurationError("x").details == {}

    def test_numeric_errors_inherit(self) -> None:
        assert issubclass(NumericError, ShiftLabError)
        assert issubclass(BallParseError, NumericError)
        assert issubclass(BallDomainError, NumericError)

    def test_undecided_errors_inherit(self) -> None:
        assert issubclass(NearestIntegerUndecidedError, UndecidedError)
        assert issubclass(WindowUndecidedError, UndecidedError)

    def test_precondition_errors_inherit(self) -> None:
        assert issubclass(InfeasibleBoxError, PreconditionError)

    def test_invariant_errors_inherit(self) -> None:
        assert issubclass(GapInconsistencyError, InvariantViolationError)
        assert issubclass(PhaseMonotonicityError, InvariantViolationError)

    def test_config_errors_are_separate(self) -> None:
        assert issubclass(InstanceError, ShiftLabError)
        assert not issubclass(InstanceError, ConfigurationError)


class TestExceptionMetadata:
    """Verify exception-specific metadata fields."""

    def test_instance_error(self) -> None:
        exc = InstanceError("s must be ≥ 2", hypothesis="s ≥ 2", details={"s": 1})
        assert exc.hypothesis == "s ≥ 2"
        assert exc.details == {"s": 1}

    def test_ball_parse_error(self) -> None:
        exc = BallParseError("0.3x")
        assert exc.text == "0.3x"
        assert "0.3x" in str(exc)

    def test_nearest_integer_undecided(self) -> None:
        exc = NearestIntegerUndecidedError((4, 5))
        assert exc.candidates == (4, 5)
        assert "4 and 5" in str(exc)

    def test_budget_error(self) -> None:
        exc = SearchBudgetExceededError(1200, 1000, details={"what": "phase cells"})
        assert exc.estimate == 1200
        assert exc.budget == 1000
        assert "1200" in exc.message
        assert exc.details["what"] == "phase cells"
