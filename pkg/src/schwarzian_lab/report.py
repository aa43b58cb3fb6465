"""Figure-and-table report rendering.

Writes a set of matplotlib figures next to the CSV tables that feed them:
the critical-bound curve, the admissible (eta, delta) region boundaries,
real-axis convexity margins of the boundary cot maps, and a Kaplan arc
profile for the Koebe function.  Everything is deterministic, so repeated
runs reproduce identical CSV bytes.
"""

from __future__ import annotations

import cmath
import csv
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import classify, constants, expr, ode  # noqa: E402

_FIGSIZE = (6.0, 4.0)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _critical_bound(out_dir: str, dpi: int) -> list[str]:
    alphas = [k * 0.98 / 49 for k in range(50)]
    bounds = [constants.c_alpha(a) for a in alphas]
    csv_path = os.path.join(out_dir, "critical_bound.csv")
    _write_csv(csv_path, ["alpha", "c_alpha"], [[a, c] for a, c in zip(alphas, bounds)])

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(alphas, bounds, lw=1.5)
    ax.set_xlabel("order alpha")
    ax.set_ylabel("critical bound c_alpha")
    ax.set_title("Critical Schwarzian half-bound vs convexity order")
    ax.grid(True, alpha=0.3)
    png_path = os.path.join(out_dir, "critical_bound.png")
    fig.savefig(png_path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return [csv_path, png_path]


def _admissible_region(out_dir: str, dpi: int) -> list[str]:
    betas = [(1.5, "beta = 3/2"), (2.5, "beta = 5/2"), (math.inf, "beta = inf")]
    csv_path = os.path.join(out_dir, "admissible_region.csv")
    rows = []
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for beta, label in betas:
        phi, _ = constants.phi_psi(beta)
        etas = [phi * k / 40 for k in range(40)] + [phi * (1 - 1e-9)]
        deltas = [constants.delta_max(e, beta) for e in etas]
        beta_text = "inf" if math.isinf(beta) else repr(beta)
        rows.extend([[beta_text, e, d] for e, d in zip(etas, deltas)])
        ax.plot(etas, deltas, lw=1.5, label=label)
    _write_csv(csv_path, ["beta", "eta", "delta_max"], rows)
    ax.set_xlabel("second-coefficient bound eta")
    ax.set_ylabel("largest admissible delta")
    ax.set_title("Admissible (eta, delta) region boundaries")
    ax.legend()
    ax.grid(True, alpha=0.3)
    png_path = os.path.join(out_dir, "admissible_region.png")
    fig.savefig(png_path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return [csv_path, png_path]


def _convexity_margin(out_dir: str, dpi: int) -> list[str]:
    cot = expr.parse("sqrt(c)*cot(sqrt(c)*z)")
    xs = [0.01 + k * (0.999 - 0.01) / 199 for k in range(200)]
    csv_path = os.path.join(out_dir, "convexity_margin.csv")
    rows = []
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for alpha in (0.0, 0.3, 0.6):
        c = constants.c_alpha(alpha)
        margins = []
        for x in xs:
            j = expr.eval_jet(cot, complex(x), {"c": c})
            margins.append(-(1.0 + (x * j.d2 / j.d1).real) - alpha)
        rows.extend([[alpha, x, m] for x, m in zip(xs, margins)])
        ax.plot(xs, margins, lw=1.2, label=f"alpha = {alpha}")
    _write_csv(csv_path, ["alpha", "x", "margin"], rows)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("x on the positive real axis")
    ax.set_ylabel("convexity margin of the boundary cot map")
    ax.set_title("Margins drain to zero at the rim for c = c_alpha")
    ax.legend()
    ax.grid(True, alpha=0.3)
    png_path = os.path.join(out_dir, "convexity_margin.png")
    fig.savefig(png_path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return [csv_path, png_path]


def _kaplan_profile(out_dir: str, dpi: int) -> list[str]:
    koebe = expr.parse("z/(1-z)^2")
    _, prof = classify.check_kaplan(koebe, {}, 0.95, 1024)
    csv_path = os.path.join(out_dir, "kaplan_profile.csv")
    _write_csv(csv_path, ["theta", "cumulative"],
               [[t, k] for t, k in zip(prof.thetas, prof.cumulative)])

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(prof.thetas, [k - t for t, k in zip(prof.thetas, prof.cumulative)], lw=1.5)
    ax.set_xlabel("theta")
    ax.set_ylabel("K(theta) - theta")
    ax.set_title("Kaplan arc profile of the Koebe map at r = 0.95")
    ax.grid(True, alpha=0.3)
    png_path = os.path.join(out_dir, "kaplan_profile.png")
    fig.savefig(png_path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return [csv_path, png_path]


def write_report(out_dir: str, dpi: int = 150) -> list[str]:
    """Render all report figures and tables into out_dir; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths: list[str] = []
    paths += _critical_bound(out_dir, dpi)
    paths += _admissible_region(out_dir, dpi)
    paths += _convexity_margin(out_dir, dpi)
    paths += _kaplan_profile(out_dir, dpi)
    return paths
