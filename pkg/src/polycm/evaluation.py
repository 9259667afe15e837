"""Error-tracked scalar arithmetic and evaluation configuration.

Every numeric quantity the package reports travels as an EvalResult: a float
value together with a guaranteed absolute error bound.  Propagation is exact
for sums (bounds add, plus one rounding ulp) and first order for products
(|a|*eb + |b|*ea + ea*eb, plus one rounding ulp).  Bounds are deliberately
conservative; verification verdicts compare margins against them, so an
overestimate can only make a check inconclusive, never wrongly "pass".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError

# Relative floor used by callers that adapt absolute budgets to magnitude:
# a handful of compensated double operations cannot do better than a few
# ulps, so asking for less than ~1e-13 relative is wasted effort.
REL_BUDGET_FLOOR = 1e-13


def ulp(value: float) -> float:
    """One unit in the last place of |value| (positive, never zero)."""
    return math.ulp(abs(value)) if value != 0.0 else 5e-324


@dataclass(frozen=True)
class EvalResult:
    """A computed float plus a guaranteed absolute error bound."""

    value: float
    abs_error: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise DomainError(f"non-finite value {self.value!r}")
        if not (self.abs_error >= 0.0) or not math.isfinite(self.abs_error):
            raise DomainError(f"invalid abs_error {self.abs_error!r}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "EvalResult | float | int") -> "EvalResult":
        o = as_result(other)
        v = self.value + o.value
        return EvalResult(v, self.abs_error + o.abs_error + ulp(v))

    __radd__ = __add__

    def __sub__(self, other: "EvalResult | float | int") -> "EvalResult":
        o = as_result(other)
        v = self.value - o.value
        return EvalResult(v, self.abs_error + o.abs_error + ulp(v))

    def __rsub__(self, other: "EvalResult | float | int") -> "EvalResult":
        return as_result(other) - self

    def __mul__(self, other: "EvalResult | float | int") -> "EvalResult":
        o = as_result(other)
        v = self.value * o.value
        err = (
            abs(self.value) * o.abs_error
            + abs(o.value) * self.abs_error
            + self.abs_error * o.abs_error
            + ulp(v)
        )
        return EvalResult(v, err)

    __rmul__ = __mul__

    def __neg__(self) -> "EvalResult":
        return EvalResult(-self.value, self.abs_error)

    def square(self) -> "EvalResult":
        return self * self

    def scaled(self, c: float) -> "EvalResult":
        """Multiply by an exact scalar (integer-valued floats stay exact)."""
        v = self.value * c
        return EvalResult(v, abs(c) * self.abs_error + ulp(v))

    # -- sign certification -------------------------------------------------

    def certainly_positive(self, factor: float = 1.0) -> bool:
        return self.value > factor * self.abs_error

    def certainly_negative(self, factor: float = 1.0) -> bool:
        return self.value < -factor * self.abs_error

    def sign_inconclusive(self, factor: float = 1.0) -> bool:
        return abs(self.value) <= factor * self.abs_error


def as_result(x: "EvalResult | float | int") -> EvalResult:
    """Wrap an exact scalar; EvalResults pass through unchanged."""
    if isinstance(x, EvalResult):
        return x
    return EvalResult(float(x), 0.0)


def result_sum(parts: list[EvalResult]) -> EvalResult:
    """Exactly-rounded sum of values; error bounds add.

    math.fsum introduces at most half an ulp of the final value, charged
    as one full ulp.
    """
    v = math.fsum(p.value for p in parts)
    err = math.fsum(p.abs_error for p in parts) + ulp(v)
    return EvalResult(v, err)


@dataclass(frozen=True)
class PrecisionConfig:
    """Shared evaluation knobs.

    target_abs_error: absolute error budget a single evaluation must meet
        (operations fail with ConvergenceError if they cannot).
    max_series_terms: hard cap on explicit series terms per evaluation.
    recurrence_shift_target: arguments are recurrence-shifted above this
        value before series summation; tail corrections may shift further
        when the budget demands it.
    """

    target_abs_error: float = 1e-12
    max_series_terms: int = 5_000_000
    recurrence_shift_target: float = 10.0

    def __post_init__(self) -> None:
        if not (self.target_abs_error > 0.0) or not math.isfinite(self.target_abs_error):
            raise DomainError("target_abs_error must be a positive finite float")
        if self.max_series_terms < 1:
            raise DomainError("max_series_terms must be a positive integer")
        if not (self.recurrence_shift_target > 0.0):
            raise DomainError("recurrence_shift_target must be positive")

    def for_magnitude(self, magnitude: float) -> "PrecisionConfig":
        """Budget adapted to a quantity of the given rough magnitude.

        Absolute targets below the double-precision relative floor are
        unreachable, so the effective budget is the larger of the configured
        target and magnitude * REL_BUDGET_FLOOR.
        """
        eff = max(self.target_abs_error, abs(magnitude) * REL_BUDGET_FLOOR)
        if eff == self.target_abs_error:
            return self
        return replace(self, target_abs_error=eff)

    def tightened(self, target: float) -> "PrecisionConfig":
        return replace(self, target_abs_error=target)


DEFAULT_PRECISION = PrecisionConfig()


def log_grid(lo: float, hi: float, count: int) -> list[float]:
    """count log-spaced points on [lo, hi], endpoints included, increasing."""
    if not (0.0 < lo < hi) or count < 2:
        raise DomainError(f"bad grid ({lo}, {hi}, {count})")
    la, lb = math.log(lo), math.log(hi)
    pts = [math.exp(la + (lb - la) * i / (count - 1)) for i in range(count)]
    pts[0], pts[-1] = lo, hi
    return pts


def linear_grid(lo: float, hi: float, count: int) -> list[float]:
    """count evenly spaced points on [lo, hi], endpoints included."""
    if not (lo < hi) or count < 2:
        raise DomainError(f"bad grid ({lo}, {hi}, {count})")
    step = (hi - lo) / (count - 1)
    pts = [lo + step * i for i in range(count)]
    pts[-1] = hi
    return pts
