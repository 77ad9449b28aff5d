"""Oriented-line geometry for a fixed ellipse in the plane Z = 0.

A point ``p = (X, Y, Z)`` is bundled with the complex combination
``A = (Y + iX)/2``.  The space of oriented lines carries coordinates
``(w, u)``: ``w`` is the stereographic image of the direction and ``u``
the fibre coordinate, tied to points by the incidence relation

    u = A w + Z - conj(A) / w.

The antiholomorphic involution ``sigma(w, u) = (-1/conj(w), conj(u))``
reverses orientation; lines through a real point come in sigma pairs.

The ellipse ``X^2/(1+eps) + Y^2/(1-eps) = 1`` enters through

    Q(w) = 1 + (eps/2) (w^2 + w^{-2}),

real on the unit circle where it equals ``1 + eps cos 2theta``.  Tangent
lines to the ellipse satisfy ``Q(w) + u^2 = 0``.  For a fixed point the
lines through it with ``Q + u^2 = 0`` are the roots of the quartic

    P(w) = w^2 (Q(w) + u(w)^2)
         = (A^2 + eps/2) w^4 + 2AZ w^3 + (1 + Z^2 - 2|A|^2) w^2
           - 2Z conj(A) w + (conj(A)^2 + eps/2),

whose root pattern relative to the unit circle classifies the point
against the branch regions: the discriminant

    Delta = (1 - eps^2) - 4 (|A|^2 + eps Re A^2)

is positive inside the ellipse (region W0 of the plane), negative
outside (W_infinity), zero on the curve itself, independent of Z.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import PolyRoots, cut_distance, quartic_roots


class ChartSingularError(ValueError):
    """Direction too close to the vertical axis for the stereographic chart."""


class RegionTag(enum.Enum):
    W0 = "W0"
    W_INFINITY = "WInfinity"
    GAMMA_CURVE = "GammaCurve"
    OFF_PLANE = "OffPlane"


@dataclass(frozen=True)
class EllipseConfig:
    """Ellipse with semi-axes sqrt(1+eps), sqrt(1-eps); |eps| < 1."""

    eps: float

    def __post_init__(self):
        if not -1.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (-1, 1), got {self.eps}")

    @property
    def a(self) -> float:
        return math.sqrt(1.0 + self.eps)

    @property
    def b(self) -> float:
        return math.sqrt(1.0 - self.eps)

    def boundary_point(self, t: float) -> "SpatialPoint":
        return SpatialPoint(self.a * math.cos(t), self.b * math.sin(t), 0.0)


@dataclass(frozen=True)
class SpatialPoint:
    x: float
    y: float
    z: float

    @property
    def A(self) -> complex:
        return complex(0.5 * self.y, 0.5 * self.x)

    @property
    def radius(self) -> float:
        return math.hypot(self.x, self.y, self.z)


@dataclass(frozen=True)
class TwistorPoint:
    w: complex
    u: complex


def sigma_twistor(t: TwistorPoint) -> TwistorPoint:
    """Orientation reversal ``(w, u) -> (-1/conj(w), conj(u))``."""
    if t.w == 0:
        raise ValueError("sigma is chart-singular at w = 0")
    return TwistorPoint(-1.0 / np.conj(t.w), np.conj(t.u))


def q_of_w(w, eps: float):
    """``Q(w) = 1 + (eps/2)(w^2 + w^{-2})``; w may be an ndarray, never 0."""
    warr = np.asarray(w, dtype=np.complex128)
    if np.any(warr == 0):
        raise ValueError("Q(w) undefined at w = 0")
    w2 = warr * warr
    val = 1.0 + 0.5 * eps * (w2 + 1.0 / w2)
    if np.ndim(w) == 0:
        return complex(val)
    return val


def incidence_u(p: SpatialPoint, w):
    """Fibre coordinate of the line through ``p`` with direction ``w``."""
    warr = np.asarray(w, dtype=np.complex128)
    if np.any(warr == 0):
        raise ValueError("incidence undefined at w = 0")
    a = p.A
    val = a * warr + p.z - np.conj(a) / warr
    if np.ndim(w) == 0:
        return complex(val)
    return val


def discriminant(p: SpatialPoint, eps: float) -> float:
    a = p.A
    return (1.0 - eps * eps) - 4.0 * (abs(a) ** 2 + eps * (a * a).real)


def classify_point(p: SpatialPoint, eps: float, tol: float = 1e-9) -> RegionTag:
    """Place ``p`` relative to the plane regions cut out by the ellipse.

    Off-plane points are tagged OFF_PLANE regardless of (X, Y); in the
    plane the sign of the discriminant separates inside from outside,
    with a ``tol``-collar flagged as the curve itself.
    """
    if abs(p.z) > tol:
        return RegionTag.OFF_PLANE
    delta = discriminant(p, eps)
    if abs(delta) <= tol:
        return RegionTag.GAMMA_CURVE
    return RegionTag.W0 if delta > 0 else RegionTag.W_INFINITY


def _quartic_coefficients(p: SpatialPoint, eps: float) -> tuple:
    a = p.A
    abar = np.conj(a)
    c4 = a * a + 0.5 * eps
    c3 = 2.0 * a * p.z
    c2 = 1.0 + p.z * p.z - 2.0 * abs(a) ** 2
    c1 = -2.0 * p.z * abar
    c0 = abar * abar + 0.5 * eps
    return complex(c0), complex(c1), complex(c2), complex(c3), complex(c4)


@dataclass(frozen=True)
class SigmaRootSet:
    """Roots of ``w^2 (Q + u^2)`` through a point, with pairing data.

    ``circle_flags`` holds "inside" / "on" / "outside" per root.
    ``sigma_pairs`` are index pairs matched under the involution; for
    points in the plane Z = 0 the quartic is even and ``antipodal_pairs``
    records the additional ``w -> -w`` matching (None off the plane,
    where no antipodal symmetry exists).  ``degenerate`` marks the
    collapse ``A^2 + eps/2 -> 0`` where roots escape to 0 and infinity
    and the polynomial drops degree.
    """

    point: SpatialPoint
    eps: float
    delta: float
    poly: PolyRoots
    roots: tuple
    circle_flags: tuple
    sigma_pairs: tuple
    antipodal_pairs: tuple | None
    degenerate: bool

    def roots_outside(self) -> tuple:
        return tuple(r for r, f in zip(self.roots, self.circle_flags) if f == "outside")

    def roots_inside(self) -> tuple:
        return tuple(r for r, f in zip(self.roots, self.circle_flags) if f == "inside")

    def sigma_closure_residual(self) -> float:
        """Max distance from the sigma image of any root to the root set."""
        return _closure_residual(self.roots, lambda w: -1.0 / np.conj(w))

    def antipodal_closure_residual(self) -> float:
        return _closure_residual(self.roots, lambda w: -w)


def _closure_residual(roots: tuple, image) -> float:
    if not roots:
        return 0.0
    arr = np.array(roots, dtype=np.complex128)
    worst = 0.0
    for r in arr:
        worst = max(worst, float(np.min(np.abs(image(r) - arr))))
    return worst


def _match_pairs(roots: tuple, image, tol: float) -> tuple:
    """Greedy nearest-image pairing; unmatched roots are left unpaired."""
    arr = np.array(roots, dtype=np.complex128)
    taken = set()
    pairs = []
    for i, r in enumerate(arr):
        if i in taken:
            continue
        target = image(r)
        dist = np.abs(arr - target)
        dist[list(taken)] = np.inf
        j = int(np.argmin(dist))
        if dist[j] <= tol:
            taken.add(i)
            taken.add(j)
            pairs.append((i, j))
    return tuple(pairs)


def sigma_roots(p: SpatialPoint, eps: float, *, on_circle_tol: float = 1e-8,
                degenerate_tol: float = 1e-12, pair_tol: float = 1e-6,
                plane_tol: float = 1e-12) -> SigmaRootSet:
    """Solve the tangency quartic through ``p`` and organise its roots.

    Near-zero roots produced when the trailing coefficient collapses are
    artifacts of clearing ``w^{-2}`` from the Laurent form and are
    dropped alongside the matching degree reduction at the top.
    """
    c0, c1, c2, c3, c4 = _quartic_coefficients(p, eps)
    poly = quartic_roots(c0, c1, c2, c3, c4, drop_tol=degenerate_tol)
    scale = max(abs(c) for c in (c0, c1, c2, c3, c4))
    roots = list(poly.roots)
    degenerate = poly.degenerate
    if abs(c0) <= degenerate_tol * scale:
        # trailing collapse: the Laurent expression has no root at the origin
        kept = [r for r in roots if abs(r) > 1e-6]
        degenerate = True
        roots = kept
    moduli = [abs(r) for r in roots]
    flags = tuple(
        "on" if abs(m - 1.0) <= on_circle_tol else ("inside" if m < 1.0 else "outside")
        for m in moduli
    )
    roots_t = tuple(roots)
    sigma_pairs = _match_pairs(roots_t, lambda w: -1.0 / np.conj(w), pair_tol)
    antipodal = _match_pairs(roots_t, lambda w: -w, pair_tol) if abs(p.z) <= plane_tol else None
    return SigmaRootSet(point=p, eps=eps, delta=discriminant(p, eps), poly=poly,
                        roots=roots_t, circle_flags=flags, sigma_pairs=sigma_pairs,
                        antipodal_pairs=antipodal, degenerate=degenerate)


def contour_safety_margin(p: SpatialPoint, eps: float, nodes: int = 4096) -> float:
    """Min distance of ``u/sqrt(Q)`` from the arctan cuts along the contour.

    Scans the unit circle on a uniform grid.  Positive margins certify
    the field integrand is branch-safe at ``p``; the margin shrinks to
    zero as ``p`` approaches the plane outside the ellipse.
    """
    theta = (2.0 * math.pi / nodes) * np.arange(nodes)
    q = 1.0 + eps * np.cos(2.0 * theta)
    u = p.z + 1j * (p.x * np.cos(theta) + p.y * np.sin(theta))
    zeta = u / np.sqrt(q)
    return float(np.min(cut_distance(zeta)))


def line_to_twistor(point: SpatialPoint, direction) -> TwistorPoint:
    """Coordinates of the oriented line through ``point`` along ``direction``.

    The chart is fixed by the incidence relation: requiring ``u`` to be
    constant along ``point + t * direction`` forces

        (d2 + i d1)/2 * w^2 + d3 * w - (d2 - i d1)/2 = 0,

    and the root on the orientation sheet is ``w = (d2 - i d1)/(1 + d3)``
    for a unit direction ``d``.  Horizontal directions land on the unit
    circle.  Directions parallel to the Z-axis have no finite chart
    coordinate and raise :class:`ChartSingularError`.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,):
        raise ValueError("direction must be a 3-vector")
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    d1, d2, d3 = (d / norm).tolist()
    if math.hypot(d1, d2) < 1e-12:
        raise ChartSingularError("direction is parallel to the Z-axis")
    w = complex(d2, -d1) / (1.0 + d3)
    return TwistorPoint(w, incidence_u(point, w))


@dataclass(frozen=True)
class GaussMapSample:
    """Tangent line of the ellipse at parameter ``theta``, as a twistor point.

    ``orientation`` (+1/-1) picks the traversal direction; the two
    orientations of one tangent line are sigma partners.  ``line_angle``
    is the angle the line makes with the Y-axis and ``tangent_distance``
    its distance from the origin; these satisfy
    ``tangent_distance^2 = 1 + eps cos(2 line_angle)``.
    """

    theta: float
    orientation: int
    image: TwistorPoint
    tangent_distance: float
    line_angle: float
    incidence_residual: float


def gauss_map(theta: float, orientation: int, eps: float) -> GaussMapSample:
    """Oriented tangent line at ellipse parameter ``theta``."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    ell = EllipseConfig(eps)
    a, b = ell.a, ell.b
    base = SpatialPoint(a * math.cos(theta), b * math.sin(theta), 0.0)
    d1 = -a * math.sin(theta) * orientation
    d2 = b * math.cos(theta) * orientation
    tp = line_to_twistor(base, (d1, d2, 0.0))
    norm = math.hypot(d1, d2)
    dist = abs(base.x * d2 - base.y * d1) / norm
    angle = math.atan2(d1, d2)
    residual = abs(q_of_w(tp.w, eps) + tp.u * tp.u)
    return GaussMapSample(theta=theta, orientation=orientation, image=tp,
                          tangent_distance=dist, line_angle=angle,
                          incidence_residual=float(residual))


def tangent_distance(theta_line: float, eps: float) -> float:
    """Distance from the origin of the tangent line at angle ``theta_line``
    to the Y-axis, built from the actual tangency point (no shortcut
    through the closed-form identity, which tests verify independently).
    """
    ell = EllipseConfig(eps)
    a, b = ell.a, ell.b
    # tangency parameter: tangent (-a sin t, b cos t) parallel to
    # (sin theta, cos theta) forces a sin t cos theta = -b cos t sin theta
    t = math.atan2(-b * math.sin(theta_line), a * math.cos(theta_line))
    return abs(a * math.cos(t) * math.cos(theta_line) - b * math.sin(t) * math.sin(theta_line))


def distance_to_ellipse(p: SpatialPoint, eps: float, nodes: int = 4096) -> float:
    """Distance from ``p`` to the ellipse curve, by dense parameter scan."""
    ell = EllipseConfig(eps)
    t = np.linspace(0.0, 2.0 * math.pi, nodes, endpoint=False)
    dx = p.x - ell.a * np.cos(t)
    dy = p.y - ell.b * np.sin(t)
    planar = np.hypot(dx, dy)
    return float(np.min(np.hypot(planar, p.z)))
