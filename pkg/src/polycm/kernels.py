"""Laplace-transform kernels with certified limits, monotonicity, and ranges.

Every kernel here is an elementary combination of E(t) = 1/(e^t - 1):

    kappa(t)       = 1/(1 - e^-t)            = 1 + E(t)
    h(k, t)        = (kappa(t) - 1/2)/t^k    = (E(t) + 1/2)/t^k
    tanh_kernel(t) = (t/2)/tanh(t/2) - 1     = t*(E(t) + 1/2) - 1
    omega(t)       = -2t e^-t/(1 - e^-2t)    = -2t E(t)/(1 + e^-t)

Working through the shared primitive keeps boundary margins stable: the
distance of h(0, t) above 1/2 is E(t) itself (computable to ~1e-22 at t = 50
where the subtraction h - 1/2 would drown in ulp(1/2)), and the distance of
h(-1, t) above 1 is exactly tanh_kernel(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .errors import CapabilityError, ConvergenceError, DomainError
from .evaluation import EvalResult, ulp

_SERIES_SWITCH = 2.0**-10

_KINDS = ("h", "omega", "tanh", "kappa")


def _validate_t(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"kernel argument must be a finite positive real, got {t!r}")
    return t


@dataclass(frozen=True)
class KernelId:
    """Names one kernel; k selects the power weight and only applies to h."""

    kind: str
    k: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise DomainError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "h":
            if not isinstance(self.k, int) or isinstance(self.k, bool):
                raise DomainError("h requires an integer power k")
        elif self.k is not None:
            raise DomainError(f"{self.kind} takes no power parameter")

    def label(self) -> str:
        return f"h[{self.k}]" if self.kind == "h" else self.kind


def reciprocal_expm1(t: float) -> EvalResult:
    """E(t) = 1/(e^t - 1), the primitive behind every kernel here.

    Below 2^-10 the Laurent series 1/t - 1/2 + t/12 - t^3/720 avoids the
    cancellation in expm1 route's reciprocal; truncation is folded into
    abs_error.  Decreasing from +inf to 0; positive everywhere.
    """
    t = _validate_t(t)
    if t < _SERIES_SWITCH:
        value = math.fsum([1.0 / t, -0.5, t / 12.0, -(t**3) / 720.0])
        trunc = 2.0 * t**5 / 30240.0
        return EvalResult(value, trunc + 2.0 * ulp(value))
    e = math.exp(-t)
    if e == 0.0:
        # t > ~745: E(t) < e^-745, below the subnormal range
        return EvalResult(0.0, 5e-324)
    value = e / (-math.expm1(-t))
    return EvalResult(value, 3.0 * ulp(value) + 5e-324)


def kappa(t: float) -> EvalResult:
    """1/(1 - e^-t) = 1 + E(t); decreasing on (0, inf) with range (1, inf)."""
    E = reciprocal_expm1(t)
    value = 1.0 + E.value
    return EvalResult(value, E.abs_error + ulp(value))


def half_shifted_kappa(t: float) -> EvalResult:
    """kappa(t) - 1/2 = E(t) + 1/2, the shared numerator of the h family."""
    E = reciprocal_expm1(t)
    value = E.value + 0.5
    return EvalResult(value, E.abs_error + ulp(value))


def h(k: int, t: float) -> EvalResult:
    """h_k(t) = (1/(1 - e^-t) - 1/2)/t^k for any integer k.

    Monotone: decreasing for k >= 0, increasing for k <= -1.  Ranges:
    (1/2, inf) at k = 0, (1, inf) at k = -1, (0, inf) otherwise.
    """
    if not isinstance(k, int) or isinstance(k, bool):
        raise DomainError(f"power k must be an integer, got {k!r}")
    t = _validate_t(t)
    num = half_shifted_kappa(t)
    try:
        tk = t ** float(k)
    except OverflowError as exc:
        raise CapabilityError(f"t^{k} overflows at t={t}") from exc
    if tk == 0.0 or not math.isfinite(tk):
        raise CapabilityError(f"t^{k} leaves the double range at t={t}")
    value = num.value / tk
    err = num.abs_error / tk + (abs(k) + 3.0) * ulp(value)
    return EvalResult(value, err)


def tanh_kernel(t: float) -> EvalResult:
    """(t/2)/tanh(t/2) - 1 = t*(E(t) + 1/2) - 1; positive and increasing.

    Below t = 0.05 the even series t^2/12 - t^4/720 + t^6/30240 sidesteps
    the subtraction of 1; the two branches stay independent of the kappa
    route there, so identity tests against kappa remain meaningful.
    """
    t = _validate_t(t)
    if t < 0.05:
        t2 = t * t
        value = t2 / 12.0 - t2 * t2 / 720.0 + t2 * t2 * t2 / 30240.0
        trunc = 2.0 * t**8 / 1209600.0
        return EvalResult(value, trunc + 2.0 * ulp(value))
    num = half_shifted_kappa(t)
    value = t * num.value - 1.0
    err = t * num.abs_error + 2.0 * ulp(max(1.0, t * num.value))
    return EvalResult(value, err)


def omega(t: float) -> EvalResult:
    """-2t e^-t/(1 - e^-2t) = -2t E(t)/(1 + e^-t); increasing from -1 to 0.

    The e^t/(1 - e^2t) form overflows for moderate t; this rewrite does not.
    """
    t = _validate_t(t)
    E = reciprocal_expm1(t)
    den = 1.0 + math.exp(-t)
    value = -2.0 * t * E.value / den
    err = 2.0 * t * E.abs_error / den + 4.0 * ulp(value)
    return EvalResult(value, err)


def omega_plus_one(t: float) -> EvalResult:
    """omega(t) + 1 computed without cancellation: 2e^-t(sinh t - t)/(1 - e^-2t).

    This is the margin of omega above its infimum -1; at t = 1e-6 it is
    ~t^2/6 = 1.7e-13, far below what omega(t) - (-1) could resolve in ulps
    of 1.  sinh t - t keeps ~2 ulp(sinh t) absolute error, which the margin
    dwarfs at every positive t.
    """
    t = _validate_t(t)
    s = math.sinh(t) - t
    g = 2.0 * math.exp(-t) * s
    den = -math.expm1(-2.0 * t)
    value = g / den
    err = (2.0 * math.exp(-t) * 2.0 * ulp(math.sinh(t))) / den + 3.0 * ulp(value)
    return EvalResult(value, err)


def kernel_value(kernel: KernelId, t: float) -> EvalResult:
    if kernel.kind == "h":
        return h(kernel.k, t)
    if kernel.kind == "omega":
        return omega(t)
    if kernel.kind == "tanh":
        return tanh_kernel(t)
    return kappa(t)


# ---------------------------------------------------------------------------
# Report machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitCheck:
    """One endpoint check.

    For a finite limit, achieved is |value - limit|; the check passes when
    that is within tolerance, or else when the approach is certified: the
    outermost grid step moves the value strictly closer to the limit with
    margins cleared (slow limits like 1/(2t) -> 0 cannot land inside a tight
    tolerance on any finite grid, but their approach is checkable).
    expected None encodes divergence; passing then means certified growth
    outward, and achieved records the endpoint value.
    """

    end: str  # "zero" or "infinity"
    expected: float | None
    achieved: float
    tolerance: float | None
    approach_certified: bool
    passed: bool


@dataclass(frozen=True)
class KernelReport:
    kernel: KernelId
    grid: tuple[float, ...]
    values: tuple[EvalResult, ...]
    monotonicity_verdict: str  # "increasing" | "decreasing" | "none"
    limit_checks: tuple[LimitCheck, ...]
    range_description: str
    range_passed: bool
    min_range_margin: float
    diagnostics: tuple[str, ...] = field(default_factory=tuple)


def _limit_table(kernel: KernelId) -> dict[str, float | None]:
    """Endpoint limits; None encodes divergence to +inf."""
    if kernel.kind == "omega":
        return {"zero": -1.0, "infinity": 0.0}
    if kernel.kind == "kappa":
        return {"zero": None, "infinity": 1.0}
    if kernel.kind == "tanh":
        return {"zero": 0.0, "infinity": None}
    k = kernel.k
    zero: float | None
    zero = 0.0 if k <= -2 else (1.0 if k == -1 else None)
    inf: float | None
    inf = None if k <= -1 else (0.5 if k == 0 else 0.0)
    return {"zero": zero, "infinity": inf}


def _adjacent_margins(kernel: KernelId, grid: tuple[float, ...]) -> list[EvalResult]:
    """Signed differences value(t_{i+1}) - value(t_i), with combined error.

    h at k = 0 and kappa flatten to 1/2 resp. 1 at large t, where direct
    subtraction of near-equal floats loses the comparison; both differ from
    E(t) by an additive constant, so their adjacent differences are compared
    through E itself.
    """
    if kernel.kind == "kappa" or (kernel.kind == "h" and kernel.k == 0):
        Es = [reciprocal_expm1(t) for t in grid]
        return [
            EvalResult(b.value - a.value, a.abs_error + b.abs_error + ulp(b.value - a.value))
            for a, b in zip(Es, Es[1:])
        ]
    vals = [kernel_value(kernel, t) for t in grid]
    return [
        EvalResult(b.value - a.value, a.abs_error + b.abs_error + ulp(b.value - a.value))
        for a, b in zip(vals, vals[1:])
    ]


def _range_margins(kernel: KernelId, t: float, v: EvalResult) -> list[EvalResult]:
    """Margins that must all be certified positive for the range claim.

    Boundary distances use the cancellation-free reformulations:
    h_0 - 1/2 = E, h_-1 - 1 = tanh_kernel/t... concretely t*h_-1 - 1 =
    tanh_kernel, kappa - 1 = E, omega + 1 via its dedicated form.
    """
    if kernel.kind == "omega":
        return [omega_plus_one(t), EvalResult(-v.value, v.abs_error)]
    if kernel.kind == "kappa":
        return [reciprocal_expm1(t)]
    if kernel.kind == "tanh":
        return [v]
    if kernel.k == 0:
        return [reciprocal_expm1(t)]
    if kernel.k == -1:
        return [tanh_kernel(t)]
    return [v]


def _range_description(kernel: KernelId) -> str:
    if kernel.kind == "omega":
        return "(-1, 0)"
    if kernel.kind == "kappa":
        return "(1, inf)"
    if kernel.kind == "tanh":
        return "(0, inf)"
    if kernel.k == 0:
        return "(1/2, inf)"
    if kernel.k == -1:
        return "(1, inf)"
    return "(0, inf)"


def kernel_report(
    kernel: KernelId,
    grid: tuple[float, ...] | list[float],
    limit_tolerance: float = 1e-5,
) -> KernelReport:
    """Evaluate the kernel over the grid and certify monotonicity, endpoint
    limits, and range membership, each only when margins clear error bounds.

    A verdict of none is a refusal to certify, not a refutation; diagnostics
    list the offending comparisons.
    """
    grid = tuple(float(t) for t in grid)
    if len(grid) < 2:
        raise DomainError("grid needs at least 2 points for adjacent comparisons")
    for a, b in zip(grid, grid[1:]):
        if not a < b:
            raise DomainError("grid must be strictly increasing")
    if grid[0] <= 0.0:
        raise DomainError("grid points must be positive")

    values = tuple(kernel_value(kernel, t) for t in grid)
    diagnostics: list[str] = []

    # monotonicity across adjacent pairs
    diffs = _adjacent_margins(kernel, grid)
    ups = sum(1 for d in diffs if d.certainly_positive())
    downs = sum(1 for d in diffs if d.certainly_negative())
    if ups == len(diffs):
        verdict = "increasing"
    elif downs == len(diffs):
        verdict = "decreasing"
    else:
        verdict = "none"
        for i, d in enumerate(diffs):
            if not (d.certainly_positive() or d.certainly_negative()):
                diagnostics.append(
                    f"inconclusive step at t={grid[i]:.6g}..{grid[i+1]:.6g}: "
                    f"diff={d.value:.3e} within error {d.abs_error:.3e}"
                )
        if ups and downs:
            diagnostics.append(f"mixed directions: {ups} up, {downs} down")

    # endpoint limits
    table = _limit_table(kernel)
    checks: list[LimitCheck] = []
    for end, idx in (("zero", 0), ("infinity", len(grid) - 1)):
        expected = table[end]
        v_end = values[idx]
        v_prev = values[1] if end == "zero" else values[-2]
        if expected is None:
            # divergent endpoint: require certified growth toward it
            d_outer = diffs[idx - 1] if end == "infinity" else diffs[0]
            if end == "infinity":
                grew = d_outer.certainly_positive()
            else:
                grew = d_outer.certainly_negative()  # value falls moving inward
            checks.append(
                LimitCheck(end, None, abs(v_end.value), None, bool(grew), bool(grew))
            )
            continue
        achieved = abs(v_end.value - expected)
        gap_prev = abs(v_prev.value - expected)
        approach = (gap_prev - achieved) > (v_end.abs_error + v_prev.abs_error)
        checks.append(
            LimitCheck(
                end,
                expected,
                achieved,
                limit_tolerance,
                bool(approach),
                achieved <= limit_tolerance or bool(approach),
            )
        )

    # range membership with stable margins
    min_margin = math.inf
    range_ok = True
    for t, v in zip(grid, values):
        for margin in _range_margins(kernel, t, v):
            min_margin = min(min_margin, margin.value - margin.abs_error)
            if not margin.certainly_positive():
                range_ok = False
                diagnostics.append(
                    f"range margin not cleared at t={t:.6g}: "
                    f"{margin.value:.3e} within error {margin.abs_error:.3e}"
                )

    return KernelReport(
        kernel=kernel,
        grid=grid,
        values=values,
        monotonicity_verdict=verdict,
        limit_checks=tuple(checks),
        range_description=_range_description(kernel),
        range_passed=range_ok,
        min_range_margin=min_margin,
        diagnostics=tuple(diagnostics),
    )


# ---------------------------------------------------------------------------
# Power-law Laplace identity
# ---------------------------------------------------------------------------


def _gamma_value(r: float) -> float:
    """Gamma(r): factorial for integer r, else quadrature of the defining
    integral of t^(r-1) e^-t over (0, inf)."""
    if float(r).is_integer():
        return float(math.factorial(int(r) - 1))
    val, est = quad(lambda t: t ** (r - 1.0) * math.exp(-t), 0.0, math.inf,
                    epsabs=1e-12, epsrel=1e-12, limit=400)
    if est > 1e-8 * (1.0 + abs(val)):
        raise ConvergenceError(f"gamma quadrature did not converge at r={r}",
                               best_bound=est)
    return val


def laplace_power_identity(r: float, x: float) -> float:
    """Residual |x^-r - (1/Gamma(r)) Integral_0^inf t^(r-1) e^(-xt) dt|.

    Checks the power-law Laplace pair numerically; stays below 1e-9 for
    moderate r and x.
    """
    r = float(r)
    x = float(x)
    if not (math.isfinite(r) and r > 0.0):
        raise DomainError(f"exponent must be a finite positive real, got {r!r}")
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"argument must be a finite positive real, got {x!r}")
    gamma_r = _gamma_value(r)
    val, est = quad(lambda t: t ** (r - 1.0) * math.exp(-x * t), 0.0, math.inf,
                    epsabs=1e-13, epsrel=1e-12, limit=400)
    if est > 1e-8 * (1.0 + abs(val)):
        raise ConvergenceError(f"Laplace quadrature did not converge at r={r}, x={x}",
                               best_bound=est)
    return abs(x ** (-r) - val / gamma_r)
