"""Verification helpers: stencils, residue ladders, suite plumbing."""

import math

import numpy as np
import pytest

from ellharm import (DEFAULT_SEED, SpatialPoint, laplacian_residual,
                     residue_cancellation, residue_pair_report, run_suites,
                     scan_blowup_factor)
from ellharm.verify import (FIELD_SUITES, SUITE_ORDER, CheckResult,
                            ResiduePairingError, _check, harmonic_suite)


def test_laplacian_residual_analytic_controls(ctx_half):
    p = SpatialPoint(0.3, -0.2, 0.5)
    # linear fields are exactly harmonic under the 7-point stencil
    linear = lambda q: 1.0 + 2.0 * q.x - 0.5 * q.y + 3.0 * q.z
    assert laplacian_residual(p, ctx_half, 1e-2, field=linear) == \
        pytest.approx(0.0, abs=1e-10)
    # x^2 has discrete Laplacian exactly 2 at any step
    quad_field = lambda q: q.x * q.x
    assert laplacian_residual(p, ctx_half, 1e-2, field=quad_field) == \
        pytest.approx(2.0, abs=1e-9)
    # the harmonic combination x^2 - z^2 cancels again
    harm = lambda q: q.x * q.x - q.z * q.z
    assert laplacian_residual(p, ctx_half, 1e-2, field=harm) == \
        pytest.approx(0.0, abs=1e-9)


def test_laplacian_residual_of_field_shows_second_order_decay(ctx_half):
    p = SpatialPoint(0.3, 0.2, 0.4)
    r1 = laplacian_residual(p, ctx_half, 1e-2)
    r2 = laplacian_residual(p, ctx_half, 5e-3)
    assert r1 / r2 == pytest.approx(4.0, abs=0.2)


def test_scan_blowup_factor_contrast():
    d = [2.0 ** -k for k in range(1, 11)]
    bounded = [1.0 + dist for dist in d]        # stays O(1)
    divergent = [dist ** -0.5 for dist in d]    # inverse square root blow-up
    assert scan_blowup_factor(d, bounded) < 2.0
    assert scan_blowup_factor(d, divergent) > 10.0
    with pytest.raises(ValueError):
        scan_blowup_factor([1.0], [1.0])
    with pytest.raises(ValueError):
        scan_blowup_factor([1.0, 0.5], [1.0])


def test_residue_pair_report_structure():
    p = SpatialPoint(1.6, 0.0, 1e-3)
    rep = residue_pair_report(p, 0.5, k=-3)
    assert len(rep.roots) == 4
    assert len(rep.outside_indices) == 2
    # residues of a rational function with no pole at 0 or infinity sum to 0
    assert abs(sum(rep.residues)) < 1e-10
    assert rep.contour_discrepancy < 1e-8
    # the outside pair nearly cancels already at this height
    assert abs(rep.pair_sum) < 1e-2


def test_residue_pair_report_rejects_bad_inputs():
    with pytest.raises(ValueError):
        residue_pair_report(SpatialPoint(1.6, 0.0, 1e-3), 0.5, k=0)
    # degenerate quartic on the symmetry axis of the round curve
    with pytest.raises(ResiduePairingError):
        residue_pair_report(SpatialPoint(0.0, 0.0, 1.0), 0.0, k=1)


def test_residue_cancellation_extrapolates_to_zero():
    base = SpatialPoint(1.6, 0.0, 0.0)
    trends = residue_cancellation(base, 0.5)
    assert sorted(trends) == [-3, -1, 1]
    for k, trend in trends.items():
        assert abs(trend.extrapolated) < 1e-10
        assert trend.worst_contour_discrepancy < 1e-8
        mags = [abs(s) for s in trend.pair_sums]
        # the ladder itself decays roughly linearly in the height
        assert mags[-1] < mags[0]


def test_residue_cancellation_validates_base_point():
    with pytest.raises(ValueError):
        residue_cancellation(SpatialPoint(1.6, 0.0, 0.1), 0.5)
    with pytest.raises(ValueError):
        residue_cancellation(SpatialPoint(0.1, 0.0, 0.0), 0.5)


def test_check_result_nan_fails():
    good = _check("x", 1e-12, 1e-10)
    assert good.passed
    bad = _check("x", float("nan"), 1e-10)
    assert not bad.passed
    boundary = _check("x", 1e-10, 1e-10)
    assert boundary.passed


def test_harmonic_suite_small_sample(ctx_round):
    rng = np.random.default_rng(5)
    rep = harmonic_suite(ctx_round, rng, n_points=4)
    assert rep.passed
    assert rep.suite == "harmonic"
    assert len(rep.checks) == 5  # 4 decay ratios + axis magnitude


def test_run_suites_geometry_only_needs_no_calibration():
    bundle = run_suites(0.5, names=("geometry", "coeffs"))
    assert bundle.passed
    assert bundle.kappa is None
    assert [r.suite for r in bundle.reports] == ["geometry", "coeffs"]


def test_run_suites_rejects_unknown_names():
    with pytest.raises(ValueError):
        run_suites(0.5, names=("geometry", "nonsense"))


def test_run_suites_is_deterministic():
    b1 = run_suites(0.0, names=("geometry", "coeffs"), seed=DEFAULT_SEED)
    b2 = run_suites(0.0, names=("geometry", "coeffs"), seed=DEFAULT_SEED)
    assert b1.as_dict() == b2.as_dict()


def test_suite_subset_reproduces_full_run_samples(ctx_half):
    # a subset run must draw the same samples as the same suite inside a
    # larger run: generators key on the suite position, not on the call
    full = run_suites(0.5, names=("geometry", "coeffs"), ctx=ctx_half)
    part = run_suites(0.5, names=("geometry",), ctx=ctx_half)
    geo_full = next(r for r in full.reports if r.suite == "geometry")
    geo_part = part.reports[0]
    assert geo_full.as_dict() == geo_part.as_dict()


def test_suite_registry_shape():
    assert set(FIELD_SUITES) <= set(SUITE_ORDER)
    assert SUITE_ORDER[0] == "geometry"
    assert len(SUITE_ORDER) == 7


def test_bundle_lines_have_verdict_per_check(ctx_half):
    bundle = run_suites(0.5, names=("coeffs",), ctx=ctx_half)
    lines = bundle.lines()
    assert lines[0].startswith("suite coeffs:")
    assert lines[-1].startswith("overall:")
    assert sum("[pass]" in ln or "[fail]" in ln for ln in lines) == \
        len(bundle.reports[0].checks)
