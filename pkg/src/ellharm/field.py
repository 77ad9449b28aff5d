"""Evaluation of the branched harmonic field and its derivatives.

Everything here is a contour mean over the unit circle of direction
space.  With ``w = e^{i theta}`` the incidence relation gives

    u(theta) = Z + i (X cos theta + Y sin theta),
    Q(theta) = 1 + eps cos 2 theta,

``Q`` real and positive on the contour for |eps| < 1, so ``sqrt(Q)``
means the positive root throughout.  The primitive integrand is

    F = Q^{-3/2} (Q + u^2) arctan(u / sqrt(Q)) + kappa u

and the field is ``phi = mean(F)``.  Differentiating under the integral
(``du/dZ = 1``, ``du/dA = w``, ``du/dAbar = -1/w``):

    phi_Z   = mean(F_u),          F_u = 2 u Q^{-3/2} arctan(u/sqrt(Q)) + 1/Q + kappa
    phi_A   = mean(F_u * w)
    F_uuu   = 4 (Q + u^2)^{-2}
    phi_ZZZ = 4 mean((Q+u^2)^{-2})
    phi_ZAA = 4 mean((Q+u^2)^{-2} w^2),   phi_ZAbarAbar with w^{-2}.

The constant ``kappa`` fixes the additive normalisation of the vertical
derivative.  It is not free: the field must have vanishing Z-derivative
on the plane outside the ellipse, and ``calibrate_kappa`` enforces that
by extrapolating the raw (kappa = 0) derivative down to the plane along
a ladder of heights and flipping the sign of the limit.  Probes at two
different distances must agree; disagreement means the quadrature was
not resolved and raises rather than returning a wrong constant.

Evaluation on the branch wall itself (the plane Z = 0 on or outside the
ellipse) is refused: the integrand's arctan argument touches its branch
cuts there and the field value is not a number but a jump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import EllipseConfig, RegionTag, SpatialPoint, classify_point
from .numerics import (QuadratureConfig, QuadratureResult, branch_arctan,
                       integrate_circle, richardson_limit)

WALL_TOL = 1e-9
DEFAULT_PROBE_SCALES = (1.5, 2.5)
CALIBRATION_DELTAS = tuple(0.01 * 0.5 ** k for k in range(7))


class WallEvaluationError(ValueError):
    """Point sits on the branch wall where the field jumps."""


class CalibrationError(RuntimeError):
    """Normalisation constant could not be pinned down reliably."""


@dataclass(frozen=True)
class ProbeExtrapolation:
    """Height ladder of raw vertical derivatives over one plane probe."""

    scale: float
    deltas: tuple
    values: tuple
    limit: float
    all_converged: bool


@dataclass(frozen=True)
class CalibrationReport:
    eps: float
    probes: tuple
    kappa: float
    spread: float

    def as_dict(self) -> dict:
        return {
            "eps": self.eps,
            "kappa": self.kappa,
            "spread": self.spread,
            "probes": [
                {
                    "scale": p.scale,
                    "deltas": list(p.deltas),
                    "values": list(p.values),
                    "limit": p.limit,
                    "all_converged": p.all_converged,
                }
                for p in self.probes
            ],
        }


@dataclass(frozen=True)
class FieldContext:
    """Frozen evaluation setup: ellipse, normalisation, quadrature.

    Build one with :func:`calibrate_kappa`; constructing directly with a
    known ``kappa`` is fine for controlled comparisons (evaluation never
    recalibrates behind your back).
    """

    ellipse: EllipseConfig
    kappa: float
    quad: QuadratureConfig
    calibration: CalibrationReport | None = None


@dataclass(frozen=True)
class FieldValue:
    phi: float
    phi_tilde: float
    error_estimate: float
    region: RegionTag


@dataclass(frozen=True)
class DerivativeBundle:
    phi_Z: float
    phi_A: complex
    phi_ZZZ: float
    phi_ZAA: complex
    phi_ZAbarAbar: complex
    error_estimate: float


def _reject_wall(p: SpatialPoint, eps: float) -> RegionTag:
    region = classify_point(p, eps, WALL_TOL)
    if region in (RegionTag.W_INFINITY, RegionTag.GAMMA_CURVE):
        raise WallEvaluationError(
            f"point ({p.x}, {p.y}, {p.z}) lies on the branch wall ({region.value}); "
            "the field jumps there and has no single value"
        )
    return region


def _contour_terms(theta: np.ndarray, p: SpatialPoint, eps: float):
    u = p.z + 1j * (p.x * np.cos(theta) + p.y * np.sin(theta))
    q = 1.0 + eps * np.cos(2.0 * theta)
    return u, q


def integrand_F(w: complex, u: complex, eps: float, kappa: float) -> complex:
    """Primitive integrand at a single contour point ``w`` (|w| = 1).

    ``Q(w)`` is real on the circle; the tiny imaginary part a slightly
    off-circle ``w`` produces is discarded so the square root stays on
    the positive branch.
    """
    w = complex(w)
    q = (1.0 + 0.5 * eps * (w * w + 1.0 / (w * w))).real
    if q <= 0.0:
        raise ValueError("Q must be positive on the contour (|eps| < 1)")
    sq = math.sqrt(q)
    return q ** -1.5 * (q + u * u) * branch_arctan(u / sq) + kappa * u


def _mean_phi(p: SpatialPoint, eps: float, kappa: float,
              quad: QuadratureConfig) -> QuadratureResult:
    def f(theta):
        u, q = _contour_terms(theta, p, eps)
        sq = np.sqrt(q)
        return q ** -1.5 * (q + u * u) * branch_arctan(u / sq) + kappa * u

    return integrate_circle(f, quad)


def _mean_phi_z(p: SpatialPoint, eps: float, kappa: float,
                quad: QuadratureConfig) -> QuadratureResult:
    def f(theta):
        u, q = _contour_terms(theta, p, eps)
        sq = np.sqrt(q)
        return 2.0 * u * q ** -1.5 * branch_arctan(u / sq) + 1.0 / q + kappa

    return integrate_circle(f, quad)


def _mean_phi_a(p: SpatialPoint, eps: float, kappa: float,
                quad: QuadratureConfig) -> QuadratureResult:
    def f(theta):
        u, q = _contour_terms(theta, p, eps)
        sq = np.sqrt(q)
        fu = 2.0 * u * q ** -1.5 * branch_arctan(u / sq) + 1.0 / q + kappa
        return fu * np.exp(1j * theta)

    return integrate_circle(f, quad)


def _mean_third(p: SpatialPoint, eps: float, quad: QuadratureConfig,
                harmonic: int) -> QuadratureResult:
    # harmonic 0, +2, -2 multiplies the double-pole core by w^harmonic
    def f(theta):
        u, q = _contour_terms(theta, p, eps)
        core = 4.0 / (q + u * u) ** 2
        if harmonic:
            core = core * np.exp(1j * harmonic * theta)
        return core

    return integrate_circle(f, quad)


def phi(p: SpatialPoint, ctx: FieldContext) -> FieldValue:
    """Field value at ``p``; the single-valued branch over Z > 0.

    ``phi_tilde`` is the even reflection ``sign(Z) * phi``, the form that
    is one-signed far from the ellipse.  The imaginary part of the
    contour mean is a pure numerical residual (conjugate nodes cancel it)
    and is folded into ``error_estimate``.
    """
    eps = ctx.ellipse.eps
    region = _reject_wall(p, eps)
    res = _mean_phi(p, eps, ctx.kappa, ctx.quad)
    value = res.value.real
    err = res.error_estimate + abs(res.value.imag)
    sign = 1.0 if p.z >= 0 else -1.0
    return FieldValue(phi=value, phi_tilde=sign * value,
                      error_estimate=err, region=region)


def phi_Z(p: SpatialPoint, ctx: FieldContext) -> float:
    eps = ctx.ellipse.eps
    _reject_wall(p, eps)
    return _mean_phi_z(p, eps, ctx.kappa, ctx.quad).value.real


def phi_A(p: SpatialPoint, ctx: FieldContext) -> complex:
    eps = ctx.ellipse.eps
    _reject_wall(p, eps)
    return _mean_phi_a(p, eps, ctx.kappa, ctx.quad).value


def gradient(p: SpatialPoint, ctx: FieldContext) -> tuple:
    """Cartesian gradient ``(phi_X, phi_Y, phi_Z)``.

    With ``A = (Y + iX)/2`` the chain rule gives
    ``phi_A = phi_Y - i phi_X`` at real points, so the Cartesian parts
    are read off one complex quadrature.
    """
    pa = phi_A(p, ctx)
    return (-pa.imag, pa.real, phi_Z(p, ctx))


def phi_third_derivs(p: SpatialPoint, ctx: FieldContext) -> DerivativeBundle:
    """First and third derivative set at ``p``.

    ``phi_ZZZ`` is real and ``phi_ZAbarAbar = conj(phi_ZAA)`` at real
    points; both facts come out of the quadrature rather than being
    imposed, and the residual imaginary part lands in the estimate.
    """
    eps = ctx.ellipse.eps
    _reject_wall(p, eps)
    rz = _mean_phi_z(p, eps, ctx.kappa, ctx.quad)
    ra = _mean_phi_a(p, eps, ctx.kappa, ctx.quad)
    r0 = _mean_third(p, eps, ctx.quad, 0)
    rp = _mean_third(p, eps, ctx.quad, 2)
    rm = _mean_third(p, eps, ctx.quad, -2)
    err = sum(r.error_estimate for r in (rz, ra, r0, rp, rm))
    err += abs(rz.value.imag) + abs(r0.value.imag)
    return DerivativeBundle(phi_Z=rz.value.real, phi_A=ra.value,
                            phi_ZZZ=r0.value.real, phi_ZAA=rp.value,
                            phi_ZAbarAbar=rm.value, error_estimate=err)


def radial_closed_form(z: float) -> float:
    """Field on the positive Z-axis of the round configuration (eps = 0),
    unit normalisation: ``(1 + Z^2) arctan(Z) + Z``."""
    return (1.0 + z * z) * math.atan(z) + z


def calibrate_kappa(eps: float, quad: QuadratureConfig | None = None,
                    probes: tuple = DEFAULT_PROBE_SCALES,
                    deltas: tuple = CALIBRATION_DELTAS,
                    spread_tol: float = 1e-5,
                    extrapolation_points: int = 4,
                    allow_extreme: bool = False) -> FieldContext:
    """Pin the normalisation constant and return a ready context.

    For each probe scale ``c`` the raw vertical derivative (kappa = 0) is
    sampled at ``(c * a, 0, delta)`` down the delta ladder and the limit
    at the plane extrapolated from the last ``extrapolation_points``
    rungs.  The true derivative must vanish there, so the constant is
    minus the limit.  Probes must agree within ``spread_tol``; beyond
    |eps| = 0.95 the quadrature cost explodes and the call refuses unless
    ``allow_extreme`` is set.
    """
    ellipse = EllipseConfig(eps)
    if abs(eps) > 0.95 and not allow_extreme:
        raise CalibrationError(
            f"|eps| = {abs(eps)} exceeds 0.95; pass allow_extreme=True to force"
        )
    if quad is None:
        quad = QuadratureConfig()
    if len(deltas) < extrapolation_points or extrapolation_points < 2:
        raise ValueError("delta ladder too short for the requested extrapolation")
    reports = []
    limits = []
    for c in probes:
        x = c * ellipse.a
        values = []
        converged = True
        for d in deltas:
            res = _mean_phi_z(SpatialPoint(x, 0.0, d), eps, 0.0, quad)
            converged = converged and res.converged
            values.append(float(res.value.real))
        tail_d = deltas[-extrapolation_points:]
        tail_v = values[-extrapolation_points:]
        limit = richardson_limit(tail_d, tail_v, power=1.0)
        reports.append(ProbeExtrapolation(scale=float(c), deltas=tuple(deltas),
                                          values=tuple(values), limit=limit,
                                          all_converged=converged))
        limits.append(limit)
    spread = max(limits) - min(limits)
    if spread > spread_tol:
        raise CalibrationError(
            f"probe limits disagree by {spread:.3e} (allowed {spread_tol:.1e}); "
            "quadrature under-resolved near the plane"
        )
    if not all(r.all_converged for r in reports):
        raise CalibrationError("quadrature hit its node ceiling during calibration")
    kappa = -sum(limits) / len(limits)
    report = CalibrationReport(eps=eps, probes=tuple(reports),
                               kappa=kappa, spread=spread)
    return FieldContext(ellipse=ellipse, kappa=kappa, quad=quad, calibration=report)
