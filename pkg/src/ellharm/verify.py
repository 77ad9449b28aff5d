"""Verification suites: numbered checks with measured-vs-tolerance results.

Every check reduces to ``measured <= tolerance`` so reports serialise
uniformly and render as margin charts.  Range assertions are recentred
(``|ratio - 4| <= 0.5``), strictness assertions use a zero or negative
tolerance.

Suites
------
geometry    tangency images, root moduli and closures, region tags
coeffs      growth coefficients: identities, mirror symmetry, monotonic
            mechanism (Cauchy-Schwarz gap)
harmonic    7-point Laplacian residual decays second order in h
matching    vertical derivative vanishes on the outer plane, field
            vanishes on the inner plane, reflection symmetries, oddness
gradient    first derivatives stay bounded approaching the ellipse
residue     outside-pair residue sums of the double-pole forms
            extrapolate to zero at the outer plane; analytic residues
            agree with small-circle contours; normalisation cross-check
asymptotic  quadratic-growth residual stays O(1) along rays

The residue machinery lives here too: the forms ``(Q+u^2)^{-2} w^k dw``
for k in {-3, -1, 1} clear to ``w^{4+k} / P(w)^2 dw`` with ``P`` the
tangency quartic, so each root of ``P`` is a double pole.  Residues are
evaluated from the exact cofactor derivative and cross-checked by a
small-circle contour mean.  Their sums over the two roots outside the
unit circle are, up to the fixed factor -4, third derivatives of the
field that vanish on the outer plane; the suite extrapolates them down
a height ladder and checks the limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .asymptotics import asymptotic_residual, coefficients, monotonicity_probe
from .field import (FieldContext, calibrate_kappa, phi, phi_A, phi_Z,
                    phi_third_derivs, radial_closed_form)
from .geometry import (EllipseConfig, SpatialPoint, discriminant,
                       distance_to_ellipse, gauss_map, sigma_roots,
                       tangent_distance)
from .numerics import QuadratureConfig, richardson_limit

DEFAULT_SEED = 53596
MATCHING_DELTAS = tuple(0.01 * 0.5 ** k for k in range(5))
RESIDUE_DELTAS = tuple(0.01 * 0.5 ** k for k in range(6))
OMEGA_POWERS = (-3, -1, 1)


class StencilError(ValueError):
    """Finite-difference stencil would cross the branch wall."""


class ResiduePairingError(RuntimeError):
    """Root pattern too ambiguous to split into circle sides."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "measured": self.measured,
                "tolerance": self.tolerance, "passed": self.passed,
                "detail": self.detail}


def _check(name: str, measured: float, tolerance: float, detail: str = "") -> CheckResult:
    measured = float(measured)
    ok = (not math.isnan(measured)) and measured <= tolerance
    return CheckResult(name=name, measured=measured, tolerance=float(tolerance),
                       passed=ok, detail=detail)


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    eps: float
    seed: int
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "eps": self.eps, "seed": self.seed,
                "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks]}

    def lines(self) -> list:
        out = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            out.append(f"  [{mark}] {c.name}: measured {c.measured:.3e}"
                       f" vs tolerance {c.tolerance:.3e}"
                       + (f"  ({c.detail})" if c.detail else ""))
        return out


# ----------------------------------------------------------------- sampling

def _plane_point(eps: float, factor: float, angle: float) -> SpatialPoint:
    ell = EllipseConfig(eps)
    return SpatialPoint(factor * ell.a * math.cos(angle),
                        factor * ell.b * math.sin(angle), 0.0)


def _sample_outer_plane(rng: np.random.Generator, eps: float, n: int) -> list:
    # scaled boundary parametrisation: the discriminant at factor f is
    # (1 - eps^2)(1 - f^2), so f >= 1.15 sits safely outside
    return [_plane_point(eps, 1.15 + 1.05 * rng.random(), 2 * math.pi * rng.random())
            for _ in range(n)]


def _sample_inner_plane(rng: np.random.Generator, eps: float, n: int,
                        shrink: float = 0.9) -> list:
    return [_plane_point(eps, shrink * math.sqrt(rng.random()),
                         2 * math.pi * rng.random()) for _ in range(n)]


def _sample_off_plane(rng: np.random.Generator, n: int, box: float = 2.0,
                      zmin: float = 0.05, zmax: float = 1.5) -> list:
    pts = []
    while len(pts) < n:
        x = box * (2 * rng.random() - 1)
        y = box * (2 * rng.random() - 1)
        z = (zmin + (zmax - zmin) * rng.random()) * (1 if rng.random() < 0.5 else -1)
        pts.append(SpatialPoint(x, y, z))
    return pts


def _sample_stencil_points(rng: np.random.Generator, eps: float, n: int,
                           h: float, gamma_margin: float = 0.2) -> list:
    pts = []
    while len(pts) < n:
        p0 = _sample_inner_plane(rng, eps, 1, shrink=0.75)[0]
        z = (0.08 + 0.5 * rng.random()) * (1 if rng.random() < 0.5 else -1)
        p = SpatialPoint(p0.x, p0.y, z)
        if distance_to_ellipse(p, eps) >= gamma_margin and _stencil_clear(p, eps, h):
            pts.append(p)
    return pts


# ------------------------------------------------------- harmonicity probe

def _stencil_clear(p: SpatialPoint, eps: float, h: float) -> bool:
    margin = 2.0 * h
    if distance_to_ellipse(p, eps) <= margin:
        return False
    if abs(p.z) > margin:
        return True
    return discriminant(p, eps) > 0.0


def laplacian_residual(p: SpatialPoint, ctx: FieldContext, h: float,
                       field: Callable[[SpatialPoint], float] | None = None) -> float:
    """Seven-point Laplacian of the field (or a supplied scalar field).

    For a harmonic function the return value is pure discretisation
    error, O(h^2).  Refuses stencils whose surrounding ball of radius 2h
    touches the branch wall or the ellipse.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if not _stencil_clear(p, ctx.ellipse.eps, h):
        raise StencilError(
            f"stencil of half-width {h} at ({p.x}, {p.y}, {p.z}) reaches the wall"
        )
    f = field if field is not None else (lambda q: phi(q, ctx).phi)
    offsets = ((h, 0.0, 0.0), (-h, 0.0, 0.0), (0.0, h, 0.0),
               (0.0, -h, 0.0), (0.0, 0.0, h), (0.0, 0.0, -h))
    total = sum(f(SpatialPoint(p.x + dx, p.y + dy, p.z + dz))
                for dx, dy, dz in offsets)
    return float((total - 6.0 * f(p)) / (h * h))


# ----------------------------------------------------------------- residues

@dataclass(frozen=True)
class ResidueReport:
    point: SpatialPoint
    k: int
    roots: tuple
    outside_indices: tuple
    residues: tuple
    pair_sum: complex
    contour_discrepancy: float


@dataclass(frozen=True)
class ResidueTrend:
    k: int
    base_point: SpatialPoint
    deltas: tuple
    pair_sums: tuple
    extrapolated: complex
    worst_contour_discrepancy: float


def _analytic_residue(roots: np.ndarray, idx: int, c4: complex, power: int) -> complex:
    # residue of w^power / (c4^2 prod (w - w_j)^2) at the double pole w_idx
    wi = roots[idx]
    others = np.delete(roots, idx)
    dif = wi - others
    g = wi ** power / (c4 * c4 * np.prod(dif * dif))
    dlog = power / wi - 2.0 * np.sum(1.0 / dif)
    return complex(g * dlog)


def _contour_residue(coeffs: tuple, roots: np.ndarray, idx: int, power: int,
                     nodes: int = 512) -> complex:
    wi = roots[idx]
    sep = np.min(np.abs(wi - np.delete(roots, idx)))
    radius = min(0.25 * float(sep), 0.05)
    theta = (2.0 * math.pi / nodes) * np.arange(nodes)
    ring = radius * np.exp(1j * theta)
    w = wi + ring
    pw = npoly.polyval(w, np.asarray(coeffs, dtype=np.complex128))
    vals = w ** power / (pw * pw) * ring
    return complex(vals.mean())


def residue_pair_report(p: SpatialPoint, eps: float, k: int,
                        collision_tol: float = 1e-6) -> ResidueReport:
    """Residues of the double-pole form with twist ``k`` at every tangency
    root through ``p``, summed over the pair outside the unit circle."""
    if k not in OMEGA_POWERS:
        raise ValueError(f"k must be one of {OMEGA_POWERS}")
    rs = sigma_roots(p, eps)
    if rs.degenerate or len(rs.roots) != 4:
        raise ResiduePairingError("tangency quartic degenerated; no residue split")
    roots = np.array(rs.roots, dtype=np.complex128)
    seps = [np.min(np.abs(np.delete(roots, i) - roots[i])) for i in range(4)]
    if min(seps) < collision_tol:
        raise ResiduePairingError(
            f"roots within {min(seps):.2e} of collision; residues unstable"
        )
    outside = tuple(i for i, f in enumerate(rs.circle_flags) if f == "outside")
    if len(outside) != 2:
        raise ResiduePairingError(
            f"expected two roots outside the unit circle, found {len(outside)}"
        )
    c4 = rs.poly.coefficients[4]
    power = 4 + k
    residues = tuple(_analytic_residue(roots, i, c4, power) for i in range(4))
    disc = max(abs(residues[i] - _contour_residue(rs.poly.coefficients, roots, i, power))
               for i in outside)
    pair = residues[outside[0]] + residues[outside[1]]
    return ResidueReport(point=p, k=k, roots=tuple(rs.roots),
                         outside_indices=outside, residues=residues,
                         pair_sum=pair, contour_discrepancy=float(disc))


def residue_cancellation(base_point: SpatialPoint, eps: float,
                         deltas: Sequence[float] = RESIDUE_DELTAS,
                         ks: Sequence[int] = OMEGA_POWERS,
                         extrapolation_points: int = 4) -> dict:
    """Height ladder of outside-pair residue sums over an outer-plane point.

    Returns one trend per twist ``k``; the extrapolated sums vanish in
    the limit because the corresponding third derivatives of the field
    are odd across the outer plane.
    """
    if base_point.z != 0.0:
        raise ValueError("base point must lie in the plane Z = 0")
    if discriminant(base_point, eps) >= 0:
        raise ValueError("base point must lie outside the ellipse")
    trends = {}
    for k in ks:
        sums = []
        worst = 0.0
        for d in deltas:
            rep = residue_pair_report(
                SpatialPoint(base_point.x, base_point.y, d), eps, k)
            sums.append(rep.pair_sum)
            worst = max(worst, rep.contour_discrepancy)
        tail_d = tuple(deltas)[-extrapolation_points:]
        tail_s = sums[-extrapolation_points:]
        limit = richardson_limit(tail_d, np.array(tail_s), power=1.0)
        trends[k] = ResidueTrend(k=k, base_point=base_point, deltas=tuple(deltas),
                                 pair_sums=tuple(sums), extrapolated=limit,
                                 worst_contour_discrepancy=worst)
    return trends


# ------------------------------------------------------------------- suites

def scan_blowup_factor(distances: Sequence[float], magnitudes: Sequence[float]) -> float:
    """Ratio of the magnitude at the closest approach to the magnitude at
    the farthest; a bounded gradient keeps this O(1)."""
    d = np.asarray(distances, dtype=float)
    m = np.asarray(magnitudes, dtype=float)
    if d.shape != m.shape or d.size < 2:
        raise ValueError("need matching distance/magnitude ladders")
    return float(m[np.argmin(d)] / m[np.argmax(d)])


def harmonic_suite(ctx: FieldContext, rng: np.random.Generator,
                   n_points: int = 30, h: float = 1e-2) -> VerificationReport:
    eps = ctx.ellipse.eps
    checks = []
    pts = _sample_stencil_points(rng, eps, n_points, h)
    for i, p in enumerate(pts):
        r_h = laplacian_residual(p, ctx, h)
        r_half = laplacian_residual(p, ctx, h / 2)
        ratio = abs(r_h) / abs(r_half) if r_half != 0 else math.inf
        checks.append(_check(
            f"laplacian_decay_ratio_{i:02d}", abs(ratio - 4.0), 0.5,
            detail=f"point ({p.x:.3f},{p.y:.3f},{p.z:.3f})"
                   f" residuals {r_h:.3e} -> {r_half:.3e}"))
    spot = laplacian_residual(SpatialPoint(0.0, 0.0, 1.0), ctx, h)
    checks.append(_check("laplacian_magnitude_axis", abs(spot), 1e-3,
                         detail=f"h = {h}"))
    return VerificationReport("harmonic", eps, 0, tuple(checks))


def matching_suite(ctx: FieldContext, rng: np.random.Generator,
                   n_outer: int = 10, n_inner: int = 10,
                   n_symmetry: int = 50) -> VerificationReport:
    eps = ctx.ellipse.eps
    checks = []
    for i, p in enumerate(_sample_outer_plane(rng, eps, n_outer)):
        vals = [phi_Z(SpatialPoint(p.x, p.y, d), ctx) for d in MATCHING_DELTAS]
        limit = richardson_limit(MATCHING_DELTAS[-4:], vals[-4:], power=1.0)
        checks.append(_check(f"outer_plane_phi_z_limit_{i:02d}", abs(limit), 1e-4,
                             detail=f"point ({p.x:.3f},{p.y:.3f})"))
    for i, p in enumerate(_sample_inner_plane(rng, eps, n_inner)):
        value = phi(p, ctx).phi
        checks.append(_check(f"inner_plane_phi_zero_{i:02d}", abs(value), 1e-13))
    for i in range(5):
        p = _sample_inner_plane(rng, eps, 1)[0]
        d = 0.02 + 0.3 * rng.random()
        up = phi(SpatialPoint(p.x, p.y, d), ctx).phi
        down = phi(SpatialPoint(p.x, p.y, -d), ctx).phi
        checks.append(_check(f"oddness_{i}", abs(up + down), 1e-9))
    worst = 0.0
    for p in _sample_off_plane(rng, n_symmetry):
        base = phi(p, ctx).phi
        mx = phi(SpatialPoint(-p.x, p.y, p.z), ctx).phi
        my = phi(SpatialPoint(p.x, -p.y, p.z), ctx).phi
        mz = phi(SpatialPoint(p.x, p.y, -p.z), ctx).phi
        worst = max(worst, abs(base - mx), abs(base - my), abs(base + mz))
    checks.append(_check("reflection_symmetries_max", worst, 1e-9,
                         detail=f"{n_symmetry} points"))
    return VerificationReport("matching", eps, 0, tuple(checks))


GRADIENT_DISTANCES = tuple(2.0 ** -k for k in range(1, 11))


def gradient_suite(ctx: FieldContext, rng: np.random.Generator) -> VerificationReport:
    eps = ctx.ellipse.eps
    ell = ctx.ellipse
    approaches = {
        "x_axis_inside": lambda d: SpatialPoint(ell.a - d, 0.0, 0.0),
        "y_axis_inside": lambda d: SpatialPoint(0.0, ell.b - d, 0.0),
        "vertical_above_edge": lambda d: SpatialPoint(ell.a * math.cos(1.0),
                                                      ell.b * math.sin(1.0), d),
    }
    checks = []
    for name, make in approaches.items():
        mags = []
        for d in GRADIENT_DISTANCES:
            p = make(d)
            mags.append(max(abs(phi_Z(p, ctx)), abs(phi_A(p, ctx))))
        factor = scan_blowup_factor(GRADIENT_DISTANCES, mags)
        checks.append(_check(f"no_blowup_{name}", factor, 10.0,
                             detail=f"magnitudes {mags[0]:.3e} .. {mags[-1]:.3e}"))
    return VerificationReport("gradient", eps, 0, tuple(checks))


def _residue_bases(eps: float) -> list:
    ell = EllipseConfig(eps)
    return [
        SpatialPoint(1.3 * ell.a, 0.0, 0.0),
        SpatialPoint(0.0, 1.4 * ell.b, 0.0),
        SpatialPoint(1.25 * ell.a * math.cos(0.8), 1.25 * ell.b * math.sin(0.8), 0.0),
    ]


def residue_suite(ctx: FieldContext, rng: np.random.Generator) -> VerificationReport:
    eps = ctx.ellipse.eps
    checks = []
    for b, base in enumerate(_residue_bases(eps)):
        trends = residue_cancellation(base, eps)
        for k, trend in trends.items():
            checks.append(_check(
                f"pair_sum_limit_base{b}_k{k}", abs(trend.extrapolated), 1e-8,
                detail=f"base ({base.x:.3f},{base.y:.3f})"))
            checks.append(_check(
                f"contour_agreement_base{b}_k{k}",
                trend.worst_contour_discrepancy, 1e-6))
        rep = residue_pair_report(SpatialPoint(base.x, base.y, RESIDUE_DELTAS[0]),
                                  eps, -1)
        checks.append(_check(f"all_residues_sum_base{b}",
                             abs(sum(rep.residues)), 1e-10,
                             detail="no pole at 0 or infinity"))
    # normalisation cross-check: -4 * outside pair sum against quadrature
    base = _residue_bases(eps)[0]
    probe = SpatialPoint(base.x, base.y, RESIDUE_DELTAS[0])
    bundle = phi_third_derivs(probe, ctx)
    for k, quad_value in ((-3, bundle.phi_ZAbarAbar), (1, bundle.phi_ZAA)):
        rep = residue_pair_report(probe, eps, k)
        diff = abs(-4.0 * rep.pair_sum - quad_value)
        checks.append(_check(f"quadrature_consistency_k{k}", diff,
                             1e-8 * max(1.0, abs(quad_value)),
                             detail=f"quadrature value {quad_value:.6e}"))
    return VerificationReport("residue", eps, 0, tuple(checks))


ASYMPTOTIC_DIRECTIONS = (
    (0.0, 0.0, 1.0),
    (1.0, 0.0, 1.0),
    (0.0, 1.0, 1.0),
    (1.0, 1.0, 1.0),
    (1.0, 1.0, -1.0),
    (-2.0, 1.0, 1.0),
)
ASYMPTOTIC_RADII = (10.0, 50.0, 100.0)


def asymptotic_suite(ctx: FieldContext, rng: np.random.Generator) -> VerificationReport:
    eps = ctx.ellipse.eps
    coeffs = coefficients(eps, ctx.quad)
    checks = []
    for d in ASYMPTOTIC_DIRECTIONS:
        samples = asymptotic_residual(d, ASYMPTOTIC_RADII, ctx, coeffs)
        scaled = [abs(s.residual_over_radius) for s in samples]
        ratio = scaled[-1] / scaled[0] if scaled[0] != 0 else math.inf
        label = ",".join(f"{c:g}" for c in d)
        checks.append(_check(f"residual_over_R_bounded_dir({label})", ratio, 2.0,
                             detail=f"|res/R| {scaled[0]:.3e} -> {scaled[-1]:.3e}"))
    if eps == 0.0:
        r = ASYMPTOTIC_RADII[0]
        diff = abs(phi(SpatialPoint(0.0, 0.0, r), ctx).phi - radial_closed_form(r))
        checks.append(_check("radial_closed_form_calibrated", diff, 1e-4,
                             detail=f"R = {r}, includes kappa calibration error"))
    return VerificationReport("asymptotic", eps, 0, tuple(checks))


def geometry_suite(ctx: FieldContext, rng: np.random.Generator) -> VerificationReport:
    eps = ctx.ellipse.eps
    checks = []
    worst_inc = 0.0
    worst_pair = 0.0
    for theta in np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False):
        plus = gauss_map(float(theta), 1, eps)
        minus = gauss_map(float(theta), -1, eps)
        worst_inc = max(worst_inc, plus.incidence_residual, minus.incidence_residual)
        worst_pair = max(worst_pair,
                         abs(minus.image.w + 1.0 / np.conj(plus.image.w)),
                         abs(minus.image.u - np.conj(plus.image.u)))
    checks.append(_check("gauss_map_incidence_max", worst_inc, 1e-10,
                         detail="64 angles, both orientations"))
    checks.append(_check("gauss_map_orientation_pairing", worst_pair, 1e-10))
    worst_tan = 0.0
    for theta in np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False):
        p_dist = tangent_distance(float(theta), eps)
        worst_tan = max(worst_tan,
                        abs(p_dist * p_dist - (1.0 + eps * math.cos(2.0 * theta))))
    checks.append(_check("tangent_distance_identity_max", worst_tan, 1e-12,
                         detail="256 line angles"))
    worst_mod = 0.0
    worst_sigma = 0.0
    worst_anti = 0.0
    for p in _sample_outer_plane(rng, eps, 100):
        rs = sigma_roots(p, eps)
        worst_mod = max(worst_mod, max(abs(abs(r) - 1.0) for r in rs.roots))
        worst_sigma = max(worst_sigma, rs.sigma_closure_residual())
        worst_anti = max(worst_anti, rs.antipodal_closure_residual())
    checks.append(_check("outer_plane_root_moduli", worst_mod, 1e-10,
                         detail="100 outer-plane points: all tangents real"))
    checks.append(_check("outer_plane_sigma_closure", worst_sigma, 1e-10))
    checks.append(_check("outer_plane_antipodal_closure", worst_anti, 1e-10))
    mismatches = 0
    for _ in range(500):
        f = 0.3 + 1.9 * rng.random()
        if abs(f - 1.0) < 1e-3:
            continue
        p = _plane_point(eps, f, 2 * math.pi * rng.random())
        inside = discriminant(p, eps) > 0
        if inside != (f < 1.0):
            mismatches += 1
    checks.append(_check("discriminant_region_agreement", mismatches, 0,
                         detail="scaled-boundary oracle"))
    if eps > 0:
        focus = SpatialPoint(math.sqrt(2.0 * eps), 0.0, 0.0)
        rs = sigma_roots(focus, eps)
        degenerate_ok = 0 if (rs.degenerate and len(rs.roots) == 0) else 1
        checks.append(_check("focal_degeneracy", degenerate_ok, 0,
                             detail="quartic collapses at the focus"))
    return VerificationReport("geometry", eps, 0, tuple(checks))


def coeffs_suite(ctx: FieldContext, rng: np.random.Generator) -> VerificationReport:
    eps = ctx.ellipse.eps
    quad = ctx.quad
    cs = coefficients(eps, quad)
    cs_m = coefficients(-eps, quad)
    checks = [
        _check("coefficients_positive", -min(cs.lam, cs.mu, cs.nu), 0.0),
        _check("additivity", cs.additivity_residual(), 1e-10),
        _check("mirror_lambda_mu", abs(cs_m.lam - cs.mu), 1e-10),
        _check("nu_even", abs(cs_m.nu - cs.nu), 1e-10),
        _check("varpi_mirror_sum", abs(cs.varpi + cs_m.varpi - 1.0), 1e-10),
    ]
    if eps == 0.0:
        checks.append(_check("round_lambda", abs(cs.lam - math.pi / 4), 1e-10))
        checks.append(_check("round_nu", abs(cs.nu - math.pi / 2), 1e-10))
        checks.append(_check("round_varpi", abs(cs.varpi - 0.5), 1e-10))
    local = [coefficients(e, quad).varpi
             for e in (eps - 0.05, eps, eps + 0.05) if -1.0 < e < 1.0]
    increase = max(b - a for a, b in zip(local, local[1:])) if len(local) > 1 else -1.0
    checks.append(_check("varpi_locally_decreasing", increase, 0.0))
    eta = 2.0 * eps / (1.0 - eps) if eps != 0.0 else 1.0
    if eta <= -0.99:
        eta = -0.99
    probe = monotonicity_probe(eta, 1.5, quad)
    checks.append(_check("derivative_identity", probe.identity_residual, 1e-6,
                         detail=f"eta = {eta:.4f}, alpha = 1.5"))
    checks.append(_check("cs_gap_positive", -probe.cs_gap, -1e-6,
                         detail="gap must exceed 1e-6"))
    flat = monotonicity_probe(eta, 1.5, quad, f_profile=lambda t: np.ones_like(t))
    checks.append(_check("constant_profile_gap_collapses", abs(flat.cs_gap), 1e-9))
    return VerificationReport("coeffs", eps, 0, tuple(checks))


# ------------------------------------------------------------ orchestration

SUITE_BUILDERS = {
    "geometry": geometry_suite,
    "coeffs": coeffs_suite,
    "harmonic": harmonic_suite,
    "matching": matching_suite,
    "gradient": gradient_suite,
    "residue": residue_suite,
    "asymptotic": asymptotic_suite,
}
SUITE_ORDER = tuple(SUITE_BUILDERS)
FIELD_SUITES = frozenset(("harmonic", "matching", "gradient", "asymptotic", "residue"))


@dataclass(frozen=True)
class VerificationBundle:
    eps: float
    seed: int
    kappa: float | None
    reports: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def as_dict(self) -> dict:
        return {
            "eps": self.eps,
            "seed": self.seed,
            "kappa": self.kappa,
            "passed": self.passed,
            "suites": [r.as_dict() for r in self.reports],
        }

    def lines(self) -> list:
        out = []
        for r in self.reports:
            out.extend(r.lines())
        out.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return out


def run_suites(eps: float, names: Sequence[str] | None = None,
               seed: int = DEFAULT_SEED,
               quad: QuadratureConfig | None = None,
               ctx: FieldContext | None = None,
               allow_extreme: bool = False) -> VerificationBundle:
    """Run the named suites (all by default) against one configuration.

    Calibration happens once, and only when a suite actually evaluates
    the field; pure geometry/coefficient runs skip it.  Each suite draws
    from its own deterministically derived generator so a subset run
    reproduces the full run's samples.
    """
    if names is None:
        names = SUITE_ORDER
    unknown = [n for n in names if n not in SUITE_BUILDERS]
    if unknown:
        raise ValueError(f"unknown suites: {unknown}")
    if quad is None:
        quad = QuadratureConfig()
    if ctx is None:
        if any(n in FIELD_SUITES for n in names):
            ctx = calibrate_kappa(eps, quad, allow_extreme=allow_extreme)
        else:
            ctx = FieldContext(ellipse=EllipseConfig(eps), kappa=0.0, quad=quad)
    reports = []
    for name in SUITE_ORDER:
        if name not in names:
            continue
        rng = np.random.default_rng([seed, SUITE_ORDER.index(name)])
        rep = SUITE_BUILDERS[name](ctx, rng)
        reports.append(VerificationReport(rep.suite, rep.eps, seed, rep.checks))
    kappa = ctx.kappa if ctx.calibration is not None else None
    return VerificationBundle(eps=eps, seed=seed, kappa=kappa, reports=tuple(reports))
