"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ApdGofError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ApdGofError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class AccuracyError(ApdGofError, RuntimeError):
    """A numerical routine could not reach the requested accuracy.

    Carries the best available estimate in :attr:`estimate`.
    """

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class DegenerateSampleError(ApdGofError, ValueError):
    """The data sample is too small or has zero spread."""


class ConfigError(ApdGofError, ValueError):
    """A study configuration violates its invariants."""
