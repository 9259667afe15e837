"""Exception taxonomy shared across the package.

Callers that map failures to process exit codes treat CapabilityError and
ConvergenceError as "numeric capability" failures (exit 3) and everything
else as usage or verification failures.
"""

from __future__ import annotations


class PolycmError(Exception):
    """Base class for all package-specific failures."""


class DomainError(PolycmError, ValueError):
    """Input outside the mathematical domain (x <= 0, bad order, ...)."""


class ConvergenceError(PolycmError, ArithmeticError):
    """A requested error budget could not be met.

    Carries the best bound that was achieved so callers can decide whether
    the partial result is still usable.
    """

    def __init__(self, message: str, best_bound: float = float("inf")):
        super().__init__(message)
        self.best_bound = best_bound


class CapabilityError(PolycmError, ArithmeticError):
    """The request exceeds what double precision / configured caps support."""


class SearchExhaustedError(PolycmError, RuntimeError):
    """A witness search scanned its whole range without a certified point."""


class ClassificationError(PolycmError, RuntimeError):
    """Numeric evidence contradicts the expected classification."""
