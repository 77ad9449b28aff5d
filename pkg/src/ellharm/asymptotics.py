"""Far-field growth coefficients and the shape-ratio monotonicity probe.

Far from the ellipse the even reflection of the field grows like a
quadratic form,

    phi_tilde ~ -lambda X^2 - mu Y^2 + nu Z^2,

with coefficients given by elliptic-type contour means of
``S = (1 + eps cos 2 theta)^{-3/2}``:

    lambda = (pi/2) mean(cos^2 theta * S)
    mu     = (pi/2) mean(sin^2 theta * S)
    nu     = (pi/2) mean(S) = lambda + mu.

The additivity ``lambda + mu = nu`` is an exact consequence of
``cos^2 + sin^2 = 1`` and doubles as a quadrature invariant.  Swapping
the sign of ``eps`` swaps the axes, hence ``lambda(-eps) = mu(eps)`` and
``nu`` is even.

The shape ratio ``varpi = lambda / nu`` runs from 1 to 0 as ``eps``
sweeps (-1, 1) and is strictly decreasing.  The mechanism: with
``f = cos^2 theta``, ``beta = 1 + alpha`` and measure
``dm = (1 + eta f)^{-beta} d theta`` one has, for

    I(eta) = integral (1 + eta f)^{-alpha} dtheta,
    J(eta) = integral f (1 + eta f)^{-alpha} dtheta,

the exact derivative identity

    J dI/deta - I dJ/deta = alpha [ (int f^2 dm)(int dm) - (int f dm)^2 ],

whose right side is a Cauchy-Schwarz gap, strictly positive because
``f`` is not constant.  Hence ``J/I`` (and with it ``varpi`` after the
substitution ``eta = 2 eps / (1 - eps)``) is strictly monotone.
``monotonicity_probe`` measures both sides of the identity with central
finite differences so the mechanism itself is testable, and accepts an
alternative ``f`` so a constant profile demonstrably collapses the gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import SpatialPoint
from .field import FieldContext, phi
from .numerics import QuadratureConfig, integrate_circle


@dataclass(frozen=True)
class CoefficientSet:
    eps: float
    lam: float
    mu: float
    nu: float
    varpi: float

    def additivity_residual(self) -> float:
        return abs(self.lam + self.mu - self.nu)


def coefficients(eps: float, quad: QuadratureConfig | None = None) -> CoefficientSet:
    """Growth coefficients at the given eccentricity parameter."""
    if not -1.0 < eps < 1.0:
        raise ValueError("eps must lie in (-1, 1)")
    if quad is None:
        quad = QuadratureConfig()

    def weight(theta):
        return (1.0 + eps * np.cos(2.0 * theta)) ** -1.5

    def mean_of(profile: Callable[[np.ndarray], np.ndarray]) -> float:
        res = integrate_circle(lambda t: profile(t) * weight(t) + 0j, quad)
        if not res.converged:
            raise ArithmeticError("coefficient quadrature hit its node ceiling")
        return res.value.real

    lam = 0.5 * math.pi * mean_of(lambda t: np.cos(t) ** 2)
    mu = 0.5 * math.pi * mean_of(lambda t: np.sin(t) ** 2)
    nu = 0.5 * math.pi * mean_of(lambda t: np.ones_like(t))
    return CoefficientSet(eps=eps, lam=lam, mu=mu, nu=nu, varpi=lam / nu)


def varpi_curve(eps_values: Sequence[float],
                quad: QuadratureConfig | None = None) -> list:
    """Shape ratio along a grid of eccentricities, as (eps, varpi) pairs."""
    return [(float(e), coefficients(float(e), quad).varpi) for e in eps_values]


@dataclass(frozen=True)
class MonotonicityProbe:
    eta: float
    alpha: float
    I_val: float
    J_val: float
    dI: float
    dJ: float
    cs_gap: float
    identity_residual: float


def monotonicity_probe(eta: float, alpha: float,
                       quad: QuadratureConfig | None = None,
                       fd_step: float = 1e-4,
                       f_profile: Callable[[np.ndarray], np.ndarray] | None = None
                       ) -> MonotonicityProbe:
    """Measure both sides of the derivative identity behind monotonicity.

    ``eta`` must stay above -1/max(f) for the weights to be positive;
    derivatives are fourth-order central differences with step
    ``fd_step``, accurate enough even close to the degenerate end where
    the moments steepen.  The default profile is ``cos^2``; passing a
    constant profile is the degenerate control, collapsing the
    Cauchy-Schwarz gap to zero.
    """
    if quad is None:
        quad = QuadratureConfig()
    f = f_profile if f_profile is not None else (lambda t: np.cos(t) ** 2)

    def raw_moment(power: int, expo: float, at_eta: float) -> float:
        def g(theta):
            base = 1.0 + at_eta * f(theta)
            if np.any(base <= 0.0):
                raise ValueError("weight 1 + eta f must stay positive")
            return f(theta) ** power * base ** -expo + 0j

        res = integrate_circle(g, quad)
        if not res.converged:
            raise ArithmeticError("moment quadrature hit its node ceiling")
        return 2.0 * math.pi * res.value.real

    def central4(power: int) -> float:
        h = fd_step
        stencil = ((-2 * h, 1.0), (-h, -8.0), (h, 8.0), (2 * h, -1.0))
        return sum(c * raw_moment(power, alpha, eta + off)
                   for off, c in stencil) / (12.0 * h)

    I_val = raw_moment(0, alpha, eta)
    J_val = raw_moment(1, alpha, eta)
    dI = central4(0)
    dJ = central4(1)
    m0 = raw_moment(0, alpha + 1.0, eta)
    m1 = raw_moment(1, alpha + 1.0, eta)
    m2 = raw_moment(2, alpha + 1.0, eta)
    cs_gap = m2 * m0 - m1 * m1
    residual = abs(J_val * dI - I_val * dJ - alpha * cs_gap)
    return MonotonicityProbe(eta=eta, alpha=alpha, I_val=I_val, J_val=J_val,
                             dI=dI, dJ=dJ, cs_gap=cs_gap,
                             identity_residual=residual)


@dataclass(frozen=True)
class AsymptoticSample:
    direction: tuple
    radius: float
    phi_tilde: float
    quadratic: float
    residual: float
    residual_over_radius: float


def asymptotic_residual(direction: Sequence[float], radii: Sequence[float],
                        ctx: FieldContext,
                        coeffs: CoefficientSet | None = None) -> list:
    """Deviation of the field from its quadratic growth along a ray.

    The residual ``phi_tilde + lam X^2 + mu Y^2 - nu Z^2`` is reported
    per radius, scaled by the radius.  Rays inside the plane Z = 0 that
    leave the ellipse hit the branch wall and raise.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or not np.linalg.norm(d) > 0:
        raise ValueError("direction must be a nonzero 3-vector")
    d = d / np.linalg.norm(d)
    if coeffs is None:
        coeffs = coefficients(ctx.ellipse.eps, ctx.quad)
    samples = []
    for r in radii:
        p = SpatialPoint(r * d[0], r * d[1], r * d[2])
        value = phi(p, ctx).phi_tilde
        quadratic = (-coeffs.lam * p.x ** 2 - coeffs.mu * p.y ** 2
                     + coeffs.nu * p.z ** 2)
        residual = value - quadratic
        samples.append(AsymptoticSample(direction=tuple(d.tolist()), radius=float(r),
                                        phi_tilde=value, quadratic=quadratic,
                                        residual=residual,
                                        residual_over_radius=residual / float(r)))
    return samples
