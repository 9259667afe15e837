"""Shared fixtures: precision configs and standard grids."""

from __future__ import annotations

import pytest

from polycm import DEFAULT_PRECISION, PrecisionConfig, log_grid


@pytest.fixture(scope="session")
def cfg() -> PrecisionConfig:
    return DEFAULT_PRECISION


@pytest.fixture(scope="session")
def loose_cfg() -> PrecisionConfig:
    return PrecisionConfig(target_abs_error=1e-9)


@pytest.fixture(scope="session")
def small_log_grid() -> list[float]:
    return log_grid(0.05, 100.0, 25)
