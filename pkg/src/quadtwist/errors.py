"""Exception types shared across the package."""

from __future__ import annotations


class QuadTwistError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(QuadTwistError, ValueError):
    """A parameter or configuration value is out of its admissible range."""


class DomainError(QuadTwistError, ValueError):
    """A mathematical function was called outside its domain."""


class PoleError(DomainError):
    """Evaluation requested at a pole."""


class InsufficientTableError(QuadTwistError, ValueError):
    """A precomputed table is too short for the requested range."""


class ArithmeticOverflowError(QuadTwistError, ArithmeticError):
    """An exact-integer computation would exceed its representation."""


class AccuracyError(QuadTwistError, ArithmeticError):
    """A numerical routine could not reach the requested tolerance.

    Attributes:
        achieved: the error estimate that was actually reached.
    """

    def __init__(self, message: str, achieved: float = float("nan")):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved
