"""Laplace-kernel evaluation, monotonicity/limit/range certification.

40-digit reference values computed independently with arbitrary-precision
arithmetic from the closed forms.
"""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycm import (
    CapabilityError,
    DomainError,
    KernelId,
    h,
    kappa,
    kernel_report,
    laplace_power_identity,
    log_grid,
    omega,
    omega_plus_one,
    tanh_kernel,
)
from polycm.kernels import half_shifted_kappa, kernel_value, reciprocal_expm1

KAPPA_AT_1 = 1.581976706869326424385002005109011558547
H1_AT_1 = 1.081976706869326424385002005109011558547
TANH_AT_2 = 0.313035285499331303636161246930847832912
OMEGA_AT_1 = -0.8509181282393215451338427632871752841817
OMEGA_AT_50 = -1.928749847963917783017342816527012574753e-20

IDENTITY_GRID = log_grid(2.0**-10, 50.0, 64)


def check_close(result, reference, slack=0.0):
    assert abs(result.value - reference) <= result.abs_error + slack


def test_frozen_point_values():
    check_close(kappa(1.0), KAPPA_AT_1, slack=math.ulp(2.0))
    check_close(h(1, 1.0), H1_AT_1, slack=math.ulp(2.0))
    check_close(tanh_kernel(2.0), TANH_AT_2, slack=math.ulp(1.0))
    check_close(omega(1.0), OMEGA_AT_1, slack=math.ulp(1.0))
    w = omega(50.0)
    assert abs(w.value - OMEGA_AT_50) <= w.abs_error + 1e-30


def test_h_at_one_equals_kappa_minus_half():
    a, b = h(1, 1.0), kappa(1.0)
    assert abs(a.value - (b.value - 0.5)) <= a.abs_error + b.abs_error


def test_kappa_asymptotes():
    small = kappa(1e-8)
    assert abs(small.value * 1e-8 - 1.0) <= 1e-6
    # kappa(ln 2) = 1 + 1/(2 - 1) = 2 exactly
    at_ln2 = kappa(math.log(2.0))
    assert abs(at_ln2.value - 2.0) <= at_ln2.abs_error + 1e-12
    large = kappa(50.0)
    assert abs(large.value - 1.0) <= 1e-12


def test_h_asymptotes():
    assert abs(h(-1, 1e-6).value - 1.0) <= 1e-5
    far = h(0, 50.0)
    assert abs(far.value - 0.5) <= 1e-12


def test_h_consistency_across_powers():
    for k in range(-3, 4):
        for t in (0.01, 1.0, 10.0):
            lhs = h(k, t) * t**float(k)
            rhs = half_shifted_kappa(t)
            assert abs(lhs.value - rhs.value) <= lhs.abs_error + rhs.abs_error


def test_small_t_series_switch_is_seamless():
    cut = 2.0**-10
    for t in (cut * (1.0 - 1e-9), cut * (1.0 + 1e-9)):
        a = reciprocal_expm1(t)
        assert a.value > 0.0
        # both branches must agree with 1/(t + t^2/2) to first order
        approx = 1.0 / t - 0.5
        assert abs(a.value - approx) <= 1e-4 * a.value


def test_tanh_kernel_small_t_quadratic():
    t = 1e-6
    r = tanh_kernel(t)
    expected = t * t / 12.0 - t**4 / 720.0
    assert abs(r.value - expected) <= r.abs_error + 1e-30
    assert r.certainly_positive()


def test_identity_tanh_equals_kappa_combination():
    # tanh_kernel(t)/t = kappa(t) - 1/2 - 1/t, two independent routes
    for t in IDENTITY_GRID:
        lhs = tanh_kernel(t).value / t
        rhs = kappa(t).value - 0.5 - 1.0 / t
        assert abs(lhs - rhs) <= 1e-10


def test_omega_range_and_complement():
    for t in log_grid(1e-6, 50.0, 32):
        w = omega(t)
        wp = omega_plus_one(t)
        assert w.certainly_negative()
        assert wp.certainly_positive()
        assert abs(wp.value - (w.value + 1.0)) <= wp.abs_error + w.abs_error + 1e-16


def test_kernel_value_dispatch():
    t = 0.7
    assert kernel_value(KernelId("omega"), t) == omega(t)
    assert kernel_value(KernelId("kappa"), t) == kappa(t)
    assert kernel_value(KernelId("tanh"), t) == tanh_kernel(t)
    assert kernel_value(KernelId("h", 2), t) == h(2, t)


def test_kernel_id_validation():
    with pytest.raises(DomainError):
        KernelId("nope")
    with pytest.raises(DomainError):
        KernelId("h")
    with pytest.raises(DomainError):
        KernelId("h", True)
    with pytest.raises(DomainError):
        KernelId("omega", 1)
    assert KernelId("h", -2).label() == "h[-2]"
    assert KernelId("kappa").label() == "kappa"


def test_report_omega():
    rep = kernel_report(KernelId("omega"), log_grid(1e-6, 50.0, 64))
    assert rep.monotonicity_verdict == "increasing"
    assert all(c.passed for c in rep.limit_checks)
    by_end = {c.end: c for c in rep.limit_checks}
    assert by_end["zero"].achieved <= 1e-5
    assert by_end["infinity"].achieved <= 1e-5
    assert rep.range_passed
    assert rep.min_range_margin > 0.0


def test_report_kappa():
    rep = kernel_report(KernelId("kappa"), log_grid(1e-6, 50.0, 64))
    assert rep.monotonicity_verdict == "decreasing"
    by_end = {c.end: c for c in rep.limit_checks}
    assert by_end["zero"].expected is None and by_end["zero"].passed
    assert by_end["infinity"].passed
    assert rep.range_passed


def test_report_tanh():
    rep = kernel_report(KernelId("tanh"), log_grid(1e-6, 50.0, 64))
    assert rep.monotonicity_verdict == "increasing"
    by_end = {c.end: c for c in rep.limit_checks}
    assert by_end["zero"].passed and by_end["zero"].achieved <= 1e-5
    assert by_end["infinity"].expected is None and by_end["infinity"].passed
    assert rep.range_passed


@pytest.mark.parametrize(
    "k,direction",
    [(-3, "increasing"), (-2, "increasing"), (-1, "increasing"),
     (0, "decreasing"), (1, "decreasing"), (2, "decreasing")],
)
def test_report_h_directions_and_limits(k, direction):
    rep = kernel_report(KernelId("h", k), log_grid(1e-6, 50.0, 64))
    assert rep.monotonicity_verdict == direction
    assert all(c.passed for c in rep.limit_checks)
    assert rep.range_passed
    if k >= 1:
        # 1/(2t^k) decay cannot land inside the tolerance on this grid;
        # the pass must come from a certified approach instead
        inf_check = {c.end: c for c in rep.limit_checks}["infinity"]
        assert inf_check.approach_certified


def test_report_grid_validation():
    with pytest.raises(DomainError):
        kernel_report(KernelId("omega"), [1.0])
    with pytest.raises(DomainError):
        kernel_report(KernelId("omega"), [2.0, 1.0])
    with pytest.raises(DomainError):
        kernel_report(KernelId("omega"), [-1.0, 1.0])


def test_laplace_power_identity_residuals():
    assert laplace_power_identity(1.0, 2.0) <= 1e-10
    assert laplace_power_identity(2.0, 1.0) <= 1e-10
    for r in (1.0, 2.0, 5.5):
        for x in (0.5, 1.0, 10.0):
            assert laplace_power_identity(r, x) <= 1e-9
    with pytest.raises(DomainError):
        laplace_power_identity(0.0, 1.0)
    with pytest.raises(DomainError):
        laplace_power_identity(1.0, -2.0)


def test_h_extreme_power_capability():
    with pytest.raises(CapabilityError):
        h(400, 1e-3)


@given(t=st.floats(min_value=1e-5, max_value=60.0, allow_nan=False))
@settings(max_examples=60, deadline=None)
def test_property_kernel_relations(t):
    e = reciprocal_expm1(t)
    assert e.value > 0.0
    kap = kappa(t)
    # 1 + E rounds to exactly 1.0 once E < eps; strict excess lives in E
    assert kap.value >= 1.0
    w = omega(t)
    assert -1.0 < w.value < 0.0
    lhs = tanh_kernel(t)
    rhs = kap * t - 0.5 * t - 1.0
    assert abs(lhs.value - rhs.value) <= lhs.abs_error + rhs.abs_error
