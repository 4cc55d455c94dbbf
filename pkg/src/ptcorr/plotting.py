"""Matplotlib figures for visibility maps and curves.

Uses the non-interactive Agg backend; every function writes to a file and
closes its figure.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .svg import CURVE_COLORS, UNDEFINED_COLOR  # noqa: E402
from .sweep import CurveSet, VisibilityGrid  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _cmap():
    cmap = plt.get_cmap("RdBu_r").copy()
    cmap.set_bad(UNDEFINED_COLOR)
    return cmap


def _draw_map(ax, grid: VisibilityGrid):
    values = np.ma.masked_invalid(grid.values)
    mesh = ax.pcolormesh(grid.kl_axis, grid.gok_axis.real, values, cmap=_cmap(), vmin=-1, vmax=1, shading="nearest")
    ax.set_xlabel(r"$\kappa l$")
    ax.set_ylabel(r"$\gamma/\kappa$")
    ax.set_title(grid.config.label)
    return mesh


def _draw_curves(ax, curves: CurveSet):
    for g in curves.configs:
        ax.plot(curves.lengths, curves.values[g], color=CURVE_COLORS[g.value], label=g.label, lw=1.2)
    ax.axhline(0, color="0.7", lw=0.6)
    ax.set_ylim(-1.05, 1.05)
    ax.set_xlabel("length")
    ax.set_ylabel("V")
    gok = curves.gamma_over_kappa
    ax.set_title(rf"$\gamma/\kappa = {gok.real:g}{gok.imag:+g}i$")


def plot_map(grid: VisibilityGrid, path) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 3.2))
        mesh = _draw_map(ax, grid)
        fig.colorbar(mesh, ax=ax, label="V")
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_curves(curves: CurveSet, path) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 3.0))
        _draw_curves(ax, curves)
        ax.legend(loc="lower right", frameon=False)
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_map_panels(grids: list, path) -> Path:
    """Side-by-side maps sharing one colour scale."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(grids), figsize=(3.3 * len(grids), 3.0), sharey=True)
        axes = np.atleast_1d(axes)
        for ax, grid in zip(axes, grids):
            mesh = _draw_map(ax, grid)
        for ax in axes[1:]:
            ax.set_ylabel("")
        fig.colorbar(mesh, ax=list(axes), label="V", shrink=0.9)
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_curve_panels(curve_sets: list, path) -> Path:
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, len(curve_sets), figsize=(3.3 * len(curve_sets), 2.8), sharey=True)
        axes = np.atleast_1d(axes)
        for ax, cs in zip(axes, curve_sets):
            _draw_curves(ax, cs)
        for ax in axes[1:]:
            ax.set_ylabel("")
        axes[-1].legend(loc="lower right", frameon=False)
        fig.savefig(path)
        plt.close(fig)
    return path
