"""Contour-integral evaluation of multivalued harmonic fields branched
over an ellipse, with geometry, asymptotics, and verification tooling."""

from .numerics import (BranchCutError, PolyRoots, QuadratureConfig,
                       QuadratureResult, branch_arctan, cut_distance,
                       integrate_circle, quartic_roots, richardson_limit)
from .geometry import (ChartSingularError, EllipseConfig, GaussMapSample,
                       RegionTag, SigmaRootSet, SpatialPoint, TwistorPoint,
                       classify_point, contour_safety_margin, discriminant,
                       distance_to_ellipse, gauss_map, incidence_u,
                       line_to_twistor, q_of_w, sigma_roots, sigma_twistor,
                       tangent_distance)
from .field import (CalibrationError, CalibrationReport, DerivativeBundle,
                    FieldContext, FieldValue, WallEvaluationError,
                    calibrate_kappa, gradient, integrand_F, phi, phi_A,
                    phi_Z, phi_third_derivs, radial_closed_form)
from .asymptotics import (AsymptoticSample, CoefficientSet,
                          MonotonicityProbe, asymptotic_residual,
                          coefficients, monotonicity_probe, varpi_curve)
from .verify import (DEFAULT_SEED, CheckResult, ResiduePairingError,
                     ResidueReport, ResidueTrend, StencilError,
                     VerificationBundle, VerificationReport,
                     laplacian_residual, residue_cancellation,
                     residue_pair_report, run_suites, scan_blowup_factor)

__version__ = "0.1.0"
