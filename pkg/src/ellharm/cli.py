"""Command-line front end.

Subcommands
-----------
eval      one field evaluation, optionally with the derivative bundle
grid      lattice evaluation to CSV or JSON, plus a slice heatmap
coeffs    growth-coefficient table over a list of eccentricities
verify    run verification suites; nonzero exit when any check fails
geometry  tangency data for one ellipse parameter

Report paths (``--out``) also get a rendered PNG next to the data file
unless ``--no-figures`` is passed.  File output is byte-deterministic
for a fixed command line: keys are sorted, floats use shortest
round-trip form, and nothing records clocks or hosts.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 evaluation error (wall point, branch cut, failed calibration).

Examples::

    ellharm eval --eps 0.5 --point 0.3,0.2,0.8 --derivs
    ellharm grid --eps 0.0 --nx 41 --ny 41 --nz 3 --out field.csv
    ellharm coeffs --eps-list -0.5,0,0.5 --out coeffs.csv
    ellharm verify --eps 0.5 --suite all --out report.json
    ellharm geometry --eps 0.5 --theta 0.7
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .asymptotics import coefficients
from .field import (CalibrationError, FieldContext, WallEvaluationError,
                    calibrate_kappa, phi, phi_third_derivs)
from .geometry import (ChartSingularError, EllipseConfig, SpatialPoint,
                       gauss_map, q_of_w, tangent_distance)
from .numerics import BranchCutError, QuadratureConfig
from .verify import (DEFAULT_SEED, SUITE_ORDER, ResiduePairingError,
                     StencilError, run_suites)

_EVAL_ERRORS = (WallEvaluationError, CalibrationError, BranchCutError,
                ChartSingularError, StencilError, ResiduePairingError,
                ArithmeticError)


@dataclass(frozen=True)
class RunConfig:
    eps: float
    seed: int
    precision: int | None
    quad: QuadratureConfig
    allow_extreme: bool
    out: str | None
    fmt: str
    figures: bool


def _run_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    eps = getattr(args, "eps", 0.0)
    if not -1.0 < eps < 1.0:
        parser.error(f"--eps must lie strictly inside (-1, 1), got {eps}")
    try:
        quad = QuadratureConfig(initial_nodes=args.quad_initial_nodes,
                                max_nodes=args.quad_max_nodes,
                                rel_tol=args.quad_rel_tol,
                                abs_tol=args.quad_abs_tol)
    except ValueError as exc:
        parser.error(str(exc))
    return RunConfig(eps=eps, seed=args.seed, precision=args.precision,
                     quad=quad, allow_extreme=args.allow_extreme,
                     out=getattr(args, "out", None),
                     fmt=getattr(args, "format", "csv"),
                     figures=not getattr(args, "no_figures", False))


def _fmt(value: float, precision: int | None) -> str:
    if value != value:
        return "nan"
    if precision is None:
        return repr(float(value))
    return f"{value:.{precision}g}"


def _fmt_complex(value: complex, precision: int | None) -> str:
    return (f"{_fmt(value.real, precision)}"
            f"{'+' if value.imag >= 0 else '-'}{_fmt(abs(value.imag), precision)}j")


def _parse_point(text: str, parser: argparse.ArgumentParser) -> SpatialPoint:
    parts = text.split(",")
    if len(parts) != 3:
        parser.error("--point expects X,Y,Z")
    try:
        x, y, z = (float(s) for s in parts)
    except ValueError:
        parser.error(f"could not parse --point {text!r}")
    return SpatialPoint(x, y, z)


def _parse_eps_list(text: str, parser: argparse.ArgumentParser) -> list:
    try:
        values = [float(s) for s in text.split(",") if s.strip() != ""]
    except ValueError:
        parser.error(f"could not parse --eps-list {text!r}")
    if not values:
        parser.error("--eps-list is empty")
    for e in values:
        if not -1.0 < e < 1.0:
            parser.error(f"eps {e} outside (-1, 1)")
    return values


def _context(cfg: RunConfig) -> FieldContext:
    return calibrate_kappa(cfg.eps, cfg.quad, allow_extreme=cfg.allow_extreme)


def _figure_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def _write_text(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# ------------------------------------------------------------- subcommands

def _cmd_eval(args, parser) -> int:
    cfg = _run_config(args, parser)
    point = _parse_point(args.point, parser)
    ctx = _context(cfg)
    fv = phi(point, ctx)
    p = cfg.precision
    print(f"eps = {_fmt(cfg.eps, p)}   kappa = {_fmt(ctx.kappa, p)}")
    print(f"point = ({_fmt(point.x, p)}, {_fmt(point.y, p)}, {_fmt(point.z, p)})"
          f"   region = {fv.region.value}")
    if args.tilde:
        print(f"phi_tilde = {_fmt(fv.phi_tilde, p)}")
    else:
        print(f"phi = {_fmt(fv.phi, p)}")
        print(f"phi_tilde = {_fmt(fv.phi_tilde, p)}")
    print(f"error_estimate = {_fmt(fv.error_estimate, p)}")
    if args.derivs:
        bundle = phi_third_derivs(point, ctx)
        print(f"phi_Z = {_fmt(bundle.phi_Z, p)}")
        print(f"phi_A = {_fmt_complex(bundle.phi_A, p)}")
        print(f"phi_ZZZ = {_fmt(bundle.phi_ZZZ, p)}")
        print(f"phi_ZAA = {_fmt_complex(bundle.phi_ZAA, p)}")
        print(f"phi_ZAbarAbar = {_fmt_complex(bundle.phi_ZAbarAbar, p)}")
    return 0


def _cmd_grid(args, parser) -> int:
    cfg = _run_config(args, parser)
    for name in ("nx", "ny", "nz"):
        if getattr(args, name) < 1:
            parser.error(f"--{name} must be at least 1")
    ctx = _context(cfg)

    def axis(lo, hi, n):
        return [lo + (hi - lo) * i / (n - 1) if n > 1 else 0.5 * (lo + hi)
                for i in range(n)]

    xs = axis(args.xmin, args.xmax, args.nx)
    ys = axis(args.ymin, args.ymax, args.ny)
    zs = axis(args.zmin, args.zmax, args.nz)
    records = []
    slice_vals = np.full((args.nx, args.ny), np.nan)
    z_mid_index = args.nz // 2
    for ix, x in enumerate(xs):
        for iy, y in enumerate(ys):
            for iz, z in enumerate(zs):
                point = SpatialPoint(x, y, z)
                try:
                    fv = phi(point, ctx)
                    rec = {"x": x, "y": y, "z": z, "phi": fv.phi,
                           "phi_tilde": fv.phi_tilde,
                           "err": fv.error_estimate, "flag": "ok"}
                    if iz == z_mid_index:
                        slice_vals[ix, iy] = fv.phi_tilde
                except WallEvaluationError:
                    rec = {"x": x, "y": y, "z": z, "phi": None,
                           "phi_tilde": None, "err": None, "flag": "wall"}
                records.append(rec)

    if cfg.fmt == "json":
        payload = {"eps": cfg.eps, "kappa": ctx.kappa,
                   "axes": {"x": xs, "y": ys, "z": zs}, "points": records}
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        lines = ["x,y,z,phi,phi_tilde,err,flag"]
        for r in records:
            cells = [repr(float(r[k])) for k in ("x", "y", "z")]
            for k in ("phi", "phi_tilde", "err"):
                cells.append("" if r[k] is None else repr(float(r[k])))
            cells.append(r["flag"])
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    if cfg.out:
        _write_text(cfg.out, text)
        print(f"wrote {len(records)} points to {cfg.out}")
        if cfg.figures:
            from .figures import render_grid_slice
            fig_path = _figure_path(cfg.out)
            render_grid_slice(xs, ys, slice_vals, cfg.eps, zs[z_mid_index], fig_path)
            print(f"wrote {fig_path}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_coeffs(args, parser) -> int:
    cfg = _run_config(args, parser)
    eps_values = _parse_eps_list(args.eps_list, parser)
    rows = []
    for e in eps_values:
        if abs(e) > 0.95 and not cfg.allow_extreme:
            parser.error(f"|eps| = {abs(e)} beyond 0.95 needs --allow-extreme")
        cs = coefficients(e, cfg.quad)
        ctx = calibrate_kappa(e, cfg.quad, allow_extreme=cfg.allow_extreme)
        rows.append({"eps": e, "lambda": cs.lam, "mu": cs.mu, "nu": cs.nu,
                     "varpi": cs.varpi, "kappa": ctx.kappa})
    header = ("eps", "lambda", "mu", "nu", "varpi", "kappa")
    if cfg.fmt == "json":
        text = json.dumps({"rows": rows}, sort_keys=True, indent=2) + "\n"
    else:
        lines = [",".join(header)]
        for r in rows:
            lines.append(",".join(repr(float(r[k])) for k in header))
        text = "\n".join(lines) + "\n"
    if cfg.out:
        _write_text(cfg.out, text)
        print(f"wrote {len(rows)} rows to {cfg.out}")
        if cfg.figures:
            from .figures import render_coefficient_curves
            fig_path = _figure_path(cfg.out)
            render_coefficient_curves(rows, fig_path)
            print(f"wrote {fig_path}")
    else:
        p = cfg.precision if cfg.precision is not None else 10
        print("  ".join(f"{h:>12s}" for h in header))
        for r in rows:
            print("  ".join(f"{r[k]:12.{p}g}"[:14].rjust(12) for k in header))
    return 0


def _cmd_verify(args, parser) -> int:
    cfg = _run_config(args, parser)
    if args.suite == "all":
        names = SUITE_ORDER
    else:
        names = tuple(s.strip() for s in args.suite.split(","))
        bad = [n for n in names if n not in SUITE_ORDER]
        if bad:
            parser.error(f"unknown suite(s) {bad}; choose from {', '.join(SUITE_ORDER)}")
    bundle = run_suites(cfg.eps, names, seed=cfg.seed, quad=cfg.quad,
                        allow_extreme=cfg.allow_extreme)
    for line in bundle.lines():
        print(line)
    if cfg.out:
        text = json.dumps(bundle.as_dict(), sort_keys=True, indent=2) + "\n"
        _write_text(cfg.out, text)
        print(f"wrote {cfg.out}")
        if cfg.figures:
            from .figures import render_report_margins
            fig_path = _figure_path(cfg.out)
            render_report_margins(bundle.as_dict(), fig_path)
            print(f"wrote {fig_path}")
    return 0 if bundle.passed else 1


def _cmd_geometry(args, parser) -> int:
    cfg = _run_config(args, parser)
    theta = args.theta
    p = cfg.precision
    print(f"eps = {_fmt(cfg.eps, p)}   theta = {_fmt(theta, p)} (ellipse parameter)")
    for orientation in (1, -1):
        s = gauss_map(theta, orientation, cfg.eps)
        print(f"orientation {orientation:+d}: w = {_fmt_complex(s.image.w, p)}"
              f"   u = {_fmt_complex(s.image.u, p)}"
              f"   |Q + u^2| = {_fmt(s.incidence_residual, p)}")
    s = gauss_map(theta, 1, cfg.eps)
    print(f"line angle (to Y-axis) = {_fmt(s.line_angle, p)}")
    print(f"tangent distance P = {_fmt(s.tangent_distance, p)}")
    identity = abs(s.tangent_distance ** 2
                   - (1.0 + cfg.eps * math.cos(2.0 * s.line_angle)))
    print(f"|P^2 - (1 + eps cos 2 angle)| = {_fmt(identity, p)}")
    direct = tangent_distance(s.line_angle, cfg.eps)
    print(f"tangent_distance({_fmt(s.line_angle, p)}) = {_fmt(direct, p)}")
    q = q_of_w(s.image.w, cfg.eps)
    print(f"Q(w) = {_fmt_complex(q, p)}")
    return 0


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellharm",
        description="Branched harmonic fields over an ellipse: evaluation, "
                    "coefficients, verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, with_eps=True):
        if with_eps:
            sp.add_argument("--eps", type=float, default=0.0,
                            help="ellipse parameter in (-1, 1); default 0")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for sampled checks")
        sp.add_argument("--precision", type=int, default=None,
                        help="significant digits for printed numbers")
        sp.add_argument("--quad-initial-nodes", type=int, default=64)
        sp.add_argument("--quad-max-nodes", type=int, default=1 << 20)
        sp.add_argument("--quad-rel-tol", type=float, default=1e-12)
        sp.add_argument("--quad-abs-tol", type=float, default=1e-12)
        sp.add_argument("--allow-extreme", action="store_true",
                        help="permit |eps| beyond 0.95 (slow)")

    sp = sub.add_parser("eval", help="evaluate the field at one point")
    common(sp)
    sp.add_argument("--point", required=True, help="X,Y,Z")
    sp.add_argument("--tilde", action="store_true",
                    help="print only the even reflection phi_tilde")
    sp.add_argument("--derivs", action="store_true",
                    help="include the derivative bundle")

    sp = sub.add_parser("grid", help="evaluate the field on a lattice")
    common(sp)
    sp.add_argument("--xmin", type=float, default=-2.0)
    sp.add_argument("--xmax", type=float, default=2.0)
    sp.add_argument("--ymin", type=float, default=-2.0)
    sp.add_argument("--ymax", type=float, default=2.0)
    sp.add_argument("--zmin", type=float, default=0.25)
    sp.add_argument("--zmax", type=float, default=0.25)
    sp.add_argument("--nx", type=int, default=21)
    sp.add_argument("--ny", type=int, default=21)
    sp.add_argument("--nz", type=int, default=1)
    sp.add_argument("--out", help="output file; stdout when omitted")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--no-figures", action="store_true")

    sp = sub.add_parser("coeffs", help="growth coefficient table")
    common(sp, with_eps=False)
    sp.add_argument("--eps-list", required=True,
                    help="comma-separated eccentricities")
    sp.add_argument("--out", help="output file; table to stdout when omitted")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--no-figures", action="store_true")

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", default="all",
                    help=f"'all' or comma list of {', '.join(SUITE_ORDER)}")
    sp.add_argument("--out", help="JSON report path")
    sp.add_argument("--no-figures", action="store_true")

    sp = sub.add_parser("geometry", help="tangency data at one parameter")
    common(sp)
    sp.add_argument("--theta", type=float, required=True,
                    help="ellipse parameter (radians)")

    return parser


_DISPATCH = {
    "eval": _cmd_eval,
    "grid": _cmd_grid,
    "coeffs": _cmd_coeffs,
    "verify": _cmd_verify,
    "geometry": _cmd_geometry,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args, parser)
    except _EVAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
