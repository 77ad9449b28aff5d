"""Shared fixtures: one quadrature config and the calibrated contexts
reused across the suite (calibration is cheap but not free)."""

import pytest

from ellharm import EllipseConfig, FieldContext, QuadratureConfig, calibrate_kappa

# one line per acceptance criterion, echoed after the run so the verdicts
# survive pytest's output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def quad():
    return QuadratureConfig()


@pytest.fixture(scope="session")
def ctx_round(quad):
    """Calibrated context for the circular branch curve (eps = 0)."""
    return calibrate_kappa(0.0, quad)


@pytest.fixture(scope="session")
def ctx_half(quad):
    return calibrate_kappa(0.5, quad)


@pytest.fixture(scope="session")
def ctx_neg_half(quad):
    return calibrate_kappa(-0.5, quad)


@pytest.fixture(scope="session")
def ctx_exact_round(quad):
    # kappa = 1 is exact for eps = 0; pinning it removes calibration noise
    # from closed-form comparisons.
    return FieldContext(ellipse=EllipseConfig(0.0), kappa=1.0, quad=quad)
