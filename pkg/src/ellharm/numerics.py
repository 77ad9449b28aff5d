"""Low-level numerics: branch-correct complex arctangent, trapezoid
quadrature on the unit circle, quartic root finding, limit extrapolation.

Conventions
-----------
* ``branch_arctan`` is the odd analytic continuation of arctan off the
  real axis, with branch cuts exactly on the imaginary axis from ``i`` up
  and from ``-i`` down.  It is realised as ``(1/2i) log((1+iz)/(1-iz))``
  with the principal logarithm: the Moebius map ``z -> (1+iz)/(1-iz)``
  carries that cut set onto the negative real axis, so the principal log
  puts the cuts where they belong and nowhere else.
* ``integrate_circle`` returns the contour *mean*, i.e.
  ``(1/2pi) * integral_0^{2pi} f(theta) dtheta``.  Integrands must be
  vectorised: ``f`` receives an ndarray of angles and returns an ndarray.
* The quadrature is the uniform trapezoid rule with node doubling.  For a
  2pi-periodic integrand analytic in a strip around the real axis this
  converges geometrically, so a last-vs-previous refinement difference is
  an honest error estimate.  Nodes from earlier levels are reused; only
  the interleaved odd nodes are evaluated per refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

CUT_TOL = 1e-12


class BranchCutError(ValueError):
    """Argument of the branched arctangent is on or hugging a cut."""


def cut_distance(zeta):
    """Distance from ``zeta`` (scalar or array) to the arctan branch cuts.

    The cuts are ``{i t : |t| >= 1}``.  For ``zeta = x + iy`` the distance
    to the upper cut is ``hypot(x, max(1 - y, 0))`` and mirrored for the
    lower one.
    """
    z = np.asarray(zeta, dtype=np.complex128)
    x = z.real
    y = z.imag
    upper = np.hypot(x, np.maximum(1.0 - y, 0.0))
    lower = np.hypot(x, np.maximum(1.0 + y, 0.0))
    d = np.minimum(upper, lower)
    if np.ndim(zeta) == 0:
        return float(d)
    return d


def branch_arctan(zeta, cut_tol: float = CUT_TOL):
    """Branched arctangent ``(1/2i) log((1+i zeta)/(1-i zeta))``.

    Odd, agrees with the real arctan on the real axis, analytic off the
    two vertical cuts.  Raises :class:`BranchCutError` when any input is
    within ``cut_tol`` of a cut, since values there are meaningless noise.

    Accepts scalars or ndarrays; the return type follows the input.
    """
    z = np.asarray(zeta, dtype=np.complex128)
    d = cut_distance(z)
    if np.any(np.asarray(d) < cut_tol):
        dmin = float(np.min(d))
        raise BranchCutError(
            f"arctan argument within {dmin:.3e} of a branch cut "
            f"(tolerance {cut_tol:.1e})"
        )
    val = -0.5j * np.log((1.0 + 1j * z) / (1.0 - 1j * z))
    if np.ndim(zeta) == 0:
        return complex(val)
    return val


@dataclass(frozen=True)
class QuadratureConfig:
    """Node-doubling schedule for the circle quadrature.

    ``initial_nodes`` must be a power of two so refinements interleave
    cleanly; ``max_nodes`` caps the ladder.  Convergence is declared when
    the refinement difference drops below
    ``max(abs_tol, rel_tol * |value|)``.
    """

    initial_nodes: int = 64
    max_nodes: int = 1 << 20
    rel_tol: float = 1e-12
    abs_tol: float = 1e-12

    def __post_init__(self):
        if self.initial_nodes < 8 or self.initial_nodes & (self.initial_nodes - 1):
            raise ValueError("initial_nodes must be a power of two, at least 8")
        if self.max_nodes < self.initial_nodes:
            raise ValueError("max_nodes must be >= initial_nodes")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    nodes_used: int
    converged: bool


def _angles(n: int) -> np.ndarray:
    return (2.0 * math.pi / n) * np.arange(n)


def _eval_checked(f: Callable[[np.ndarray], np.ndarray], theta: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(theta), dtype=np.complex128)
    if vals.shape != theta.shape:
        raise ValueError("integrand must return one value per node")
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand returned a non-finite value on the contour")
    return vals


def integrate_circle(f: Callable[[np.ndarray], np.ndarray],
                     config: QuadratureConfig = QuadratureConfig()) -> QuadratureResult:
    """Mean of ``f`` over the unit circle by trapezoid node doubling.

    The trapezoid rule on uniform angles is exact for trigonometric
    polynomials of degree below the node count, so smooth integrands
    converge after a couple of doublings; integrands with singularities
    near the contour push the ladder deeper.  ``converged=False`` means
    ``max_nodes`` was exhausted first, with the last difference reported
    as the error estimate.
    """
    n = config.initial_nodes
    value = _eval_checked(f, _angles(n)).mean()
    err = math.inf
    converged = False
    while n < config.max_nodes:
        odd = _angles(2 * n)[1::2]
        refined = 0.5 * (value + _eval_checked(f, odd).mean())
        n *= 2
        err = abs(refined - value)
        value = refined
        if err <= max(config.abs_tol, config.rel_tol * abs(value)):
            converged = True
            break
    return QuadratureResult(value=complex(value), error_estimate=float(err),
                            nodes_used=n, converged=converged)


@dataclass(frozen=True)
class PolyRoots:
    """Roots of a quartic given by ascending coefficients ``c0..c4``.

    ``effective_degree`` is the degree after discarding leading
    coefficients that are negligible against the largest one; when that
    happens (roots escaping to infinity) ``degenerate`` is set.  Trailing
    near-zero coefficients likewise mark roots collapsing to the origin.
    """

    coefficients: tuple
    roots: tuple
    effective_degree: int
    degenerate: bool


def quartic_roots(c0: complex, c1: complex, c2: complex, c3: complex, c4: complex,
                  *, drop_tol: float = 1e-12, residual_tol: float = 1e-12,
                  newton_iters: int = 20) -> PolyRoots:
    """Roots of ``c4 w^4 + c3 w^3 + c2 w^2 + c1 w + c0``.

    Companion-matrix eigenvalues seeded into a Newton polish; every
    returned root satisfies ``|p(w)| <= residual_tol * max|c_k|``.
    Coefficients smaller than ``drop_tol * max|c_k|`` at the top of the
    polynomial are treated as zero (degree drop).
    """
    coeffs = np.array([c0, c1, c2, c3, c4], dtype=np.complex128)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        raise ValueError("all coefficients vanish")
    degree = 4
    while degree > 0 and abs(coeffs[degree]) <= drop_tol * scale:
        degree -= 1
    degenerate = degree < 4
    if degree == 0:
        return PolyRoots(tuple(coeffs), (), 0, True)

    work = coeffs[: degree + 1]
    roots = np.roots(work[::-1])
    deriv = npoly.polyder(work)

    best = roots.copy()
    best_res = np.abs(npoly.polyval(best, work))
    current = roots.copy()
    for _ in range(newton_iters):
        p = npoly.polyval(current, work)
        dp = npoly.polyval(current, deriv)
        step = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
        current = current - step
        res = np.abs(npoly.polyval(current, work))
        better = res < best_res
        best[better] = current[better]
        best_res[better] = res[better]
        if np.all(best_res <= 0.01 * residual_tol * scale):
            break
    if np.max(best_res) > residual_tol * scale:
        raise ArithmeticError(
            f"root polish stalled at residual {np.max(best_res):.3e} "
            f"(limit {residual_tol * scale:.3e})"
        )
    return PolyRoots(tuple(coeffs), tuple(complex(r) for r in best), degree, degenerate)


def richardson_limit(deltas: Sequence[float], values: Sequence, power: float = 1.0):
    """Extrapolate ``values`` sampled at ``deltas`` to the limit delta -> 0.

    Neville's scheme on the abscissae ``delta**power``, evaluated at zero:
    exact for any polynomial of degree < len(deltas) in ``delta**power``.
    ``power=2`` suits even functions sampled symmetrically.  Deltas must
    be positive, strictly decreasing, and pairwise distinct.
    """
    x = np.asarray(deltas, dtype=float) ** power
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least two samples to extrapolate")
    if np.any(x <= 0) or np.any(np.diff(x) >= 0):
        raise ValueError("deltas must be positive and strictly decreasing")
    y = np.asarray(values)
    if y.shape != x.shape:
        raise ValueError("values and deltas must have equal length")
    tableau = y.astype(np.complex128 if np.iscomplexobj(y) else np.float64)
    n = x.size
    for m in range(1, n):
        tableau = (x[:n - m] * tableau[1:n - m + 1] - x[m:] * tableau[:n - m]) / (x[:n - m] - x[m:])
    out = tableau[0]
    return complex(out) if np.iscomplexobj(y) else float(out)
