"""File renderers for report and grid output.  Headless only.

Each renderer takes plain data (dicts, arrays) already destined for the
delimited output and writes a PNG next to it; nothing here recomputes
field values.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def render_report_margins(bundle: dict, path: str) -> None:
    """Margin chart for a verification bundle: one bar per check, the
    measured value in units of its tolerance on a log scale."""
    labels = []
    ratios = []
    colors = []
    for suite in bundle["suites"]:
        for c in suite["checks"]:
            labels.append(f"{suite['suite']}/{c['name']}")
            tol = c["tolerance"]
            meas = c["measured"]
            # signed/zero tolerances do not scale; show pass/fail at unit height
            if tol > 0 and meas > 0:
                ratios.append(meas / tol)
            else:
                ratios.append(1.0 if not c["passed"] else 1e-3)
            colors.append("#2a7f3f" if c["passed"] else "#b03a2e")
    height = max(3.0, 0.18 * len(labels) + 1.2)
    fig, ax = plt.subplots(figsize=(9.5, height))
    y = np.arange(len(labels))
    ax.barh(y, np.maximum(ratios, 1e-16), color=colors)
    ax.axvline(1.0, color="black", lw=1.0, ls="--")
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels(labels, fontsize=6)
    ax.invert_yaxis()
    ax.set_xlabel("measured / tolerance (dashed line = limit)")
    status = "PASS" if bundle["passed"] else "FAIL"
    ax.set_title(f"verification margins, eps = {bundle['eps']:g} [{status}]")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_grid_slice(xs, ys, values: np.ndarray, eps: float, z_level: float,
                      path: str) -> None:
    """Heatmap of one horizontal slice of the even-reflected field, with
    the ellipse outline; wall cells arrive as NaN and render blank."""
    fig, ax = plt.subplots(figsize=(7.0, 5.6))
    masked = np.ma.masked_invalid(np.asarray(values, dtype=float))
    mesh = ax.pcolormesh(xs, ys, masked.T, shading="nearest", cmap="RdBu_r")
    fig.colorbar(mesh, ax=ax, label="phi_tilde")
    t = np.linspace(0.0, 2.0 * math.pi, 512)
    ax.plot(math.sqrt(1.0 + eps) * np.cos(t), math.sqrt(1.0 - eps) * np.sin(t),
            color="black", lw=1.2)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal")
    ax.set_title(f"phi_tilde at z = {z_level:g}, eps = {eps:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_coefficient_curves(rows: list, path: str) -> None:
    """Two panels: growth coefficients and the shape ratio against eps."""
    eps = [r["eps"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.0, 4.2))
    for key, style in (("lambda", "o-"), ("mu", "s-"), ("nu", "^-")):
        ax1.plot(eps, [r[key] for r in rows], style, label=key, ms=4)
    ax1.set_xlabel("eps")
    ax1.legend()
    ax1.set_title("growth coefficients")
    ax1.grid(alpha=0.3)
    ax2.plot(eps, [r["varpi"] for r in rows], "o-", color="#6a3d9a", ms=4)
    ax2.axhline(0.5, color="gray", lw=0.8, ls=":")
    ax2.set_xlabel("eps")
    ax2.set_title("shape ratio varpi = lambda/nu")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
