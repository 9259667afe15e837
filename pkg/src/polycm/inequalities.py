"""Double-inequality checks for digamma and polygamma magnitudes.

    ln x - 1/x  <  psi(x)        <  ln x - 1/(2x)
    (k-1)!/x^k + k!/(2x^(k+1))  <  |psi^(k)(x)|  <  (k-1)!/x^k + k!/x^(k+1)

Both are strict on (0, inf); a check passes only when each margin exceeds
twice the evaluation's abs_error plus the bound's own rounding, so numeric
noise can never fake strictness.  The upper digamma margin decays like
1/(12 x^2), which is why margins are assembled with fsum instead of chains
of subtractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .evaluation import DEFAULT_PRECISION, EvalResult, PrecisionConfig, ulp
from .polygamma import (
    digamma,
    digamma_magnitude_estimate,
    magnitude_lower_bound,
    polygamma,
)

_EPS = 2.0 ** -52


@dataclass(frozen=True)
class InequalityResult:
    """One bound check at (k, x); k = 0 is the digamma log-bound pair.

    margins are (middle - lower, upper - middle); passed requires both to
    exceed 2*(middle.abs_error + margin rounding).
    """

    k: int
    x: float
    lower: float
    middle: EvalResult
    upper: float
    margins: tuple[float, float]
    margin_error: float
    passed: bool


def _validate_x(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"argument must be a finite positive real, got {x!r}")
    return x


def psi_log_bounds_check(
    x: float, cfg: PrecisionConfig = DEFAULT_PRECISION
) -> InequalityResult:
    """ln x - 1/x < psi(x) < ln x - 1/(2x), margins demanded strict.

    The upper margin approaches 1/(12x^2) for large x; computing it as
    fsum([-psi, ln x, -1/(2x)]) keeps the rounding at a few ulps of ln x so
    the shrinking margin still clears the error bar.
    """
    x = _validate_x(x)
    eff = cfg.for_magnitude(digamma_magnitude_estimate(x))
    mid = digamma(x, eff)
    lnx = math.log(x)
    inv = 1.0 / x
    lower = lnx - inv
    upper = lnx - 0.5 * inv
    margin_lo = math.fsum([mid.value, -lnx, inv])
    margin_hi = math.fsum([lnx, -0.5 * inv, -mid.value])
    bound_rounding = 3.0 * _EPS * (abs(lnx) + inv) + 2.0 * ulp(max(abs(mid.value), 1.0))
    margin_error = mid.abs_error + bound_rounding
    passed = margin_lo > 2.0 * margin_error and margin_hi > 2.0 * margin_error
    return InequalityResult(
        k=0,
        x=x,
        lower=lower,
        middle=mid,
        upper=upper,
        margins=(margin_lo, margin_hi),
        margin_error=margin_error,
        passed=passed,
    )


def polygamma_bounds_check(
    k: int, x: float, cfg: PrecisionConfig = DEFAULT_PRECISION
) -> InequalityResult:
    """(k-1)!/x^k + k!/(2x^(k+1)) < |psi^(k)(x)| < same + k!/x^(k+1)."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise DomainError(f"order must be a positive integer, got {k!r}")
    x = _validate_x(x)
    eff = cfg.for_magnitude(magnitude_lower_bound(k, x))
    raw = polygamma(k, x, eff)
    mid = EvalResult(abs(raw.value), raw.abs_error)
    X = Fraction(x)
    base = Fraction(math.factorial(k - 1)) / X**k
    step = Fraction(math.factorial(k)) / X ** (k + 1)
    lower_exact = base + step / 2
    upper_exact = base + step
    lower = float(lower_exact)
    upper = float(upper_exact)
    margin_lo = float(Fraction(mid.value) - lower_exact)
    margin_hi = float(upper_exact - Fraction(mid.value))
    margin_error = mid.abs_error + 2.0 * ulp(upper)
    passed = margin_lo > 2.0 * margin_error and margin_hi > 2.0 * margin_error
    return InequalityResult(
        k=k,
        x=x,
        lower=lower,
        middle=mid,
        upper=upper,
        margins=(margin_lo, margin_hi),
        margin_error=margin_error,
        passed=passed,
    )


@dataclass(frozen=True)
class BoundsSuiteReport:
    k_max: int
    grid: tuple[float, ...]
    results: tuple[InequalityResult, ...]
    failures: tuple[InequalityResult, ...]
    min_lower_margin: float
    min_upper_margin: float

    @property
    def all_passed(self) -> bool:
        return not self.failures


def bounds_suite(
    k_max: int,
    grid,
    cfg: PrecisionConfig = DEFAULT_PRECISION,
) -> BoundsSuiteReport:
    """Cross product of both checks: k = 0 rows are the digamma log bounds,
    k = 1..k_max the polygamma bounds, each at every grid point."""
    if isinstance(k_max, bool) or not isinstance(k_max, int) or k_max < 1:
        raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
    pts = tuple(float(t) for t in grid)
    results: list[InequalityResult] = []
    for x in pts:
        results.append(psi_log_bounds_check(x, cfg))
    for k in range(1, k_max + 1):
        for x in pts:
            results.append(polygamma_bounds_check(k, x, cfg))
    failures = tuple(r for r in results if not r.passed)
    min_lo = min((r.margins[0] for r in results), default=math.inf)
    min_hi = min((r.margins[1] for r in results), default=math.inf)
    return BoundsSuiteReport(
        k_max=k_max,
        grid=pts,
        results=tuple(results),
        failures=failures,
        min_lower_margin=min_lo,
        min_upper_margin=min_hi,
    )
