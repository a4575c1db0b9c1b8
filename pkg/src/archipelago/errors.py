"""Exception types shared across the package."""


class ArchipelagoError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ArchipelagoError, ValueError):
    """An input violates a documented precondition (bounds, shapes, ranges)."""


class EvaluationError(ArchipelagoError, RuntimeError):
    """An objective evaluator failed; carries the offending decision vector."""

    def __init__(self, message: str, decision=None):
        super().__init__(message)
        self.decision = decision


class StateError(ArchipelagoError, RuntimeError):
    """An operation was applied to an object in an invalid state."""


class ConfigError(ArchipelagoError, ValueError):
    """A run or campaign configuration is invalid."""
