"""Matplotlib figures written next to the CLI's CSV/JSON reports."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

REPORT_PARAMS = {
    "font.family": "serif",
    "font.size": 10,
    "axes.titlesize": 11,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "axes.linewidth": 0.8,
    "figure.dpi": 110,
    "svg.hashsalt": "plankbound",
}

PALETTE = ["#0C5DA5", "#00A08A", "#F2AD00", "#B40F20", "#5BBCD6"]


def finalize_axes(ax):
    for spine in ("top", "right"):
        ax.spines[spine].set_visible(False)
    ax.grid(alpha=0.25, linewidth=0.5, linestyle="--")


def save_figure(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_ratio_scan(U, ratios, threshold, best, path):
    """Chord/width ratio over the scanned directions.

    Planar scans are drawn against the polar angle; higher dimensions show
    the sorted ratios.
    """
    with plt.rc_context(REPORT_PARAMS):
        fig, ax = plt.subplots(figsize=(6, 3.4))
        if U.shape[1] == 2:
            theta = np.mod(np.arctan2(U[:, 1], U[:, 0]), 2 * math.pi)
            order = np.argsort(theta)
            ax.plot(theta[order], ratios[order], color=PALETTE[0], lw=1.2, label=r"$\ell/w$")
            bu, bv = best
            ax.plot([math.atan2(bu[1], bu[0]) % (2 * math.pi)], [bv], "o", color=PALETTE[3],
                    label=f"min {bv:.6f}")
            ax.set_xlabel("direction angle (rad)")
        else:
            ax.plot(np.sort(ratios), color=PALETTE[0], lw=1.2, label=r"$\ell/w$, sorted")
            ax.axhline(best[1], color=PALETTE[3], lw=0.8, ls=":", label=f"min {best[1]:.6f}")
            ax.set_xlabel("direction rank")
        ax.axhline(threshold, color=PALETTE[2], lw=1.0, ls="--",
                   label=rf"$2/(1+\sqrt{{d}})$ = {threshold:.6f}")
        ax.set_ylabel("chord / width")
        ax.legend(loc="best", frameon=False)
        finalize_axes(ax)
        return save_figure(fig, path)


def plot_certificate(report, path):
    rows = report.rows
    with plt.rc_context(REPORT_PARAMS):
        fig, ax = plt.subplots(figsize=(max(4, 0.5 * len(rows) + 2.5), 3.4))
        idx = np.arange(len(rows))
        ax.bar(idx - 0.2, [r.rw for r in rows], 0.4, color=PALETTE[0], label="relative width")
        ax.bar(idx + 0.2, [r.width_over_ell for r in rows], 0.4, color=PALETTE[1],
               label="width / chord")
        ax.set_xticks(idx)
        ax.set_xlabel("plank")
        ax.set_title(rf"$\Sigma$ rw = {report.sum_rw:.6f},  "
                     rf"$\Sigma$ width/$\ell$ = {report.sum_width_over_ell:.6f}")
        ax.legend(loc="best", frameon=False)
        finalize_axes(ax)
        return save_figure(fig, path)


def plot_normalization(body, normalized, path):
    """Planar bodies before and after the John map, with the sandwich circles."""
    if body.dim != 2:
        return None

    def outline(V):
        c = V.mean(axis=0)
        order = np.argsort(np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0]))
        P = V[order]
        return np.vstack([P, P[:1]])

    from .geometry import prune_to_hull

    with plt.rc_context(REPORT_PARAMS):
        fig, ax = plt.subplots(figsize=(4.2, 4.2))
        t = np.linspace(0, 2 * math.pi, 361)
        for rad, ls in ((1.0, "-"), (math.sqrt(2), "--")):
            ax.plot(rad * np.cos(t), rad * np.sin(t), color="0.6", lw=0.8, ls=ls)
        P = outline(prune_to_hull(body).vertices)
        Q = outline(prune_to_hull(normalized).vertices)
        ax.plot(P[:, 0], P[:, 1], color=PALETTE[0], lw=1.0, label="difference body")
        ax.plot(Q[:, 0], Q[:, 1], color=PALETTE[3], lw=1.4, label="John position")
        ax.set_aspect("equal")
        ax.legend(loc="upper right", frameon=False)
        finalize_axes(ax)
        return save_figure(fig, path)


def plot_witness(witness, path):
    """``y/h`` against ``h`` on ``[1, r]`` with the bound and the sharp point."""
    from .bounds import ratio_closed_form

    r = witness.r
    hs = np.linspace(1.0, r, 400)
    ys = [ratio_closed_form(r, float(min(h, r))) for h in hs]
    with plt.rc_context(REPORT_PARAMS):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(hs, ys, color=PALETTE[0], lw=1.2, label=r"$y/h$ at $r=\sqrt{d}$")
        ax.axhline(witness.bound, color=PALETTE[2], ls="--", lw=1.0, label=r"$2/(1+\sqrt{d})$")
        ax.plot([witness.h], [witness.ratio], "o", color=PALETTE[3], label="sharp point")
        ax.set_xlabel("h")
        ax.set_ylabel("ratio")
        ax.set_title(f"d = {witness.d}")
        ax.legend(loc="best", frameon=False)
        finalize_axes(ax)
        return save_figure(fig, path)
