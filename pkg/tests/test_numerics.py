"""Branch-aware arctangent, circle quadrature, quartic roots, Richardson."""

import math

import numpy as np
import pytest

from ellharm import (BranchCutError, QuadratureConfig, branch_arctan,
                     cut_distance, integrate_circle, quartic_roots,
                     richardson_limit)

# mean of (1 + 0.5 cos 2t)^(-3/2) over the circle, frozen from a 2e6-node
# Riemann sum
S_MEAN_HALF = 1.311123534366887


def test_branch_arctan_matches_real_arctan():
    x = np.linspace(-5.0, 5.0, 41)
    got = branch_arctan(x + 0j)
    np.testing.assert_allclose(got.real, np.arctan(x), rtol=0, atol=1e-15)
    np.testing.assert_allclose(got.imag, 0.0, rtol=0, atol=1e-15)


def test_branch_arctan_pure_imaginary_is_artanh():
    # arctan(iy) = i artanh(y) for |y| < 1
    assert branch_arctan(0.5j) == pytest.approx(1j * math.atanh(0.5), abs=1e-15)
    assert branch_arctan(-0.25j) == pytest.approx(-1j * math.atanh(0.25), abs=1e-15)


def test_branch_arctan_scalar_input_gives_scalar():
    out = branch_arctan(1.0 + 0j)
    assert isinstance(out, complex)
    assert out == pytest.approx(math.pi / 4)


def test_branch_arctan_rejects_points_on_the_cut():
    with pytest.raises(BranchCutError):
        branch_arctan(1.5j)
    with pytest.raises(BranchCutError):
        branch_arctan(-1.0000000000001j)
    # just off the cut is fine
    val = branch_arctan(0.1 + 1.5j)
    assert np.isfinite(val.real) and np.isfinite(val.imag)


def test_cut_distance_values():
    assert cut_distance(0.0 + 0j) == pytest.approx(1.0, abs=1e-15)
    # nearest cut point to 3 + 4i is 3 + 4i projected onto {iy : y >= 1}
    assert cut_distance(3.0 + 4.0j) == pytest.approx(3.0, abs=1e-15)
    assert cut_distance(0.0 + 0.5j) == pytest.approx(0.5, abs=1e-15)
    assert cut_distance(2.0j) == pytest.approx(0.0, abs=1e-15)
    arr = cut_distance(np.array([0.0 + 0j, 2.0j, -2.0j]))
    np.testing.assert_allclose(arr, [1.0, 0.0, 0.0], atol=1e-15)


def test_integrate_circle_exact_for_low_trig():
    quad = QuadratureConfig()

    def f(theta):
        return 2.0 + np.exp(1j * theta) + 0.25 * np.exp(-3j * theta)

    res = integrate_circle(f, quad)
    assert res.converged
    assert res.value == pytest.approx(2.0, abs=1e-14)
    assert res.nodes_used <= 256


def test_integrate_circle_smooth_integrand_frozen_value():
    def f(theta):
        return (1.0 + 0.5 * np.cos(2.0 * theta)) ** -1.5 + 0j

    res = integrate_circle(f, QuadratureConfig())
    assert res.converged
    assert res.value.real == pytest.approx(S_MEAN_HALF, abs=1e-14)
    assert abs(res.value.imag) < 1e-15


def test_integrate_circle_node_doubling_reuses_and_converges():
    calls = []

    def f(theta):
        calls.append(theta.size)
        return np.exp(np.cos(theta)) + 0j

    res = integrate_circle(f, QuadratureConfig(initial_nodes=16))
    assert res.converged
    # each doubling evaluates only as many new nodes as already exist
    assert calls[0] == 16
    assert all(c == sum(calls[:i]) for i, c in enumerate(calls[1:], 1))
    assert res.nodes_used == sum(calls)
    # I0(1) = mean of exp(cos t)
    assert res.value.real == pytest.approx(1.2660658777520084, abs=1e-13)


def test_integrate_circle_reports_nonconvergence():
    def f(theta):
        return np.abs(np.sin(theta / 2.0)) + 0j

    res = integrate_circle(f, QuadratureConfig(max_nodes=1024))
    assert not res.converged
    assert res.nodes_used == 1024
    assert res.error_estimate > 0.0


def test_integrate_circle_rejects_bad_integrand():
    def bad_values(theta):
        out = np.ones_like(theta, dtype=complex)
        out[0] = np.nan
        return out

    with pytest.raises(ValueError):
        integrate_circle(bad_values, QuadratureConfig())

    def bad_shape(theta):
        return np.ones(3, dtype=complex)

    with pytest.raises(ValueError):
        integrate_circle(bad_shape, QuadratureConfig())


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(initial_nodes=48)  # not a power of two
    with pytest.raises(ValueError):
        QuadratureConfig(initial_nodes=4)
    with pytest.raises(ValueError):
        QuadratureConfig(initial_nodes=128, max_nodes=64)


def test_quartic_roots_known_factorisation():
    # (w^2 + 1)(w - 2)(w + 3) = w^4 + w^3 - 5 w^2 + w - 6
    out = quartic_roots(-6.0, 1.0, -5.0, 1.0, 1.0)
    assert out.effective_degree == 4
    assert not out.degenerate
    got = np.sort_complex(out.roots)
    expected = np.sort_complex(np.array([1j, -1j, 2.0, -3.0]))
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_quartic_roots_degree_drop_and_degenerate():
    # c4 = 0 leaves a cubic
    out = quartic_roots(-1.0, 0.0, 0.0, 1.0, 0.0)
    assert out.effective_degree == 3
    assert out.degenerate
    assert len(out.roots) == 3
    # constant polynomial: no roots at all
    const = quartic_roots(2.0, 0.0, 0.0, 0.0, 0.0)
    assert const.effective_degree == 0
    assert const.degenerate
    assert len(const.roots) == 0
    with pytest.raises(ValueError):
        quartic_roots(0.0, 0.0, 0.0, 0.0, 0.0)


def test_quartic_roots_polish_tightens_residuals():
    rng = np.random.default_rng(7)
    for _ in range(20):
        roots = rng.normal(size=4) + 1j * rng.normal(size=4)
        coeffs = np.poly(roots)  # leading first
        out = quartic_roots(coeffs[4], coeffs[3], coeffs[2], coeffs[1], coeffs[0])
        got = np.sort_complex(out.roots)
        expected = np.sort_complex(roots)
        np.testing.assert_allclose(got, expected, atol=1e-8)


def test_richardson_limit_kills_linear_error():
    deltas = [0.1, 0.05, 0.025, 0.0125]
    values = [3.0 + 2.0 * d for d in deltas]
    assert richardson_limit(deltas, values, power=1.0) == pytest.approx(3.0, abs=1e-12)


def test_richardson_limit_accelerates_smooth_sequence():
    deltas = np.array([0.4, 0.2, 0.1, 0.05])
    values = np.arctan(deltas) / deltas  # -> 1 with even-power error
    lim = richardson_limit(deltas, values, power=2.0)
    assert lim == pytest.approx(1.0, abs=1e-7)
    # plain last value is far worse
    assert abs(values[-1] - 1.0) > 1e-4


def test_richardson_limit_complex_values():
    deltas = [0.2, 0.1, 0.05]
    values = [(1.0 + 2.0j) + (3.0 - 1.0j) * d for d in deltas]
    lim = richardson_limit(deltas, values, power=1.0)
    assert lim == pytest.approx(1.0 + 2.0j, abs=1e-12)
