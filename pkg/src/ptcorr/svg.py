"""Dependency-free SVG rendering: visibility heatmaps and curve polylines."""

from __future__ import annotations

import math

import numpy as np

from .sweep import CurveSet, VisibilityGrid

UNDEFINED_COLOR = "#9e9e9e"
# cyan, green, yellow, magenta in geometry order
CURVE_COLORS = {"m-xmtx": "#00a0c8", "m-mt": "#2ca02c", "mt-m": "#d4b000", "xmtx-m": "#c8149c"}

_W, _H = 640, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 90, 30, 60


def diverging_color(v: float) -> str:
    """Blue at -1, white at 0, red at +1; gray when undefined."""
    if v is None or math.isnan(v):
        return UNDEFINED_COLOR
    v = min(max(v, -1.0), 1.0)
    if v < 0:
        r, g, b = 1 + v, 1 + v, 1.0
    else:
        r, g, b = 1.0, 1 - v, 1 - v
    return "#{:02x}{:02x}{:02x}".format(round(255 * r), round(255 * g), round(255 * b))


def _ticks(lo, hi, count=5):
    """Round-valued ticks (1, 2, 5 times a power of ten) inside [lo, hi]."""
    raw = (hi - lo) / (count - 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(k * mag for k in (1, 2, 5, 10) if k * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [k * step for k in range(first, last + 1)]


def _num(x) -> str:
    return f"{x:.6g}"


def _frame(parts, x0, x1, y0, y1, xlabel, ylabel, title):
    pw = _W - _LEFT - _RIGHT
    ph = _H - _TOP - _BOTTOM
    parts.append(f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in _ticks(x0, x1):
        px = _LEFT + (t - x0) / (x1 - x0) * pw
        parts.append(f'<line x1="{px:.2f}" y1="{_TOP + ph}" x2="{px:.2f}" y2="{_TOP + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{px:.2f}" y="{_TOP + ph + 18}" font-size="11" text-anchor="middle">{_num(t)}</text>')
    for t in _ticks(y0, y1):
        py = _TOP + ph - (t - y0) / (y1 - y0) * ph
        parts.append(f'<line x1="{_LEFT - 5}" y1="{py:.2f}" x2="{_LEFT}" y2="{py:.2f}" stroke="black"/>')
        parts.append(f'<text x="{_LEFT - 8}" y="{py + 4:.2f}" font-size="11" text-anchor="end">{_num(t)}</text>')
    parts.append(f'<text x="{_LEFT + pw / 2}" y="{_H - 15}" font-size="13" text-anchor="middle">{xlabel}</text>')
    parts.append(
        f'<text x="18" y="{_TOP + ph / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {_TOP + ph / 2})">{ylabel}</text>'
    )
    parts.append(f'<text x="{_LEFT + pw / 2}" y="20" font-size="14" text-anchor="middle">{title}</text>')


def _open():
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]


def _edges(axis):
    """Cell boundaries centred on the axis nodes."""
    a = np.asarray(axis, dtype=float)
    mid = (a[1:] + a[:-1]) / 2
    return np.concatenate([[a[0] - (mid[0] - a[0])], mid, [a[-1] + (a[-1] - mid[-1])]])


def heatmap_svg(grid: VisibilityGrid, title: str | None = None) -> str:
    """One ``<rect>`` per grid cell, kappa*l horizontal, gamma/kappa vertical."""
    xe = _edges(grid.kl_axis)
    ye = _edges(grid.gok_axis.real)
    pw = _W - _LEFT - _RIGHT
    ph = _H - _TOP - _BOTTOM
    sx = pw / (xe[-1] - xe[0])
    sy = ph / (ye[-1] - ye[0])
    parts = _open()
    for j in range(len(grid.gok_axis)):
        y_hi = _TOP + ph - (ye[j + 1] - ye[0]) * sy
        h = (ye[j + 1] - ye[j]) * sy
        for i in range(len(grid.kl_axis)):
            x = _LEFT + (xe[i] - xe[0]) * sx
            w = (xe[i + 1] - xe[i]) * sx
            parts.append(
                f'<rect x="{x:.3f}" y="{y_hi:.3f}" width="{w:.3f}" height="{h:.3f}" '
                f'fill="{diverging_color(grid.values[j, i])}"/>'
            )
    _frame(parts, xe[0], xe[-1], ye[0], ye[-1], "κl", "γ/κ", title or f"V, {grid.config.label}")
    # colorbar
    cx = _W - _RIGHT + 20
    steps = 40
    for k in range(steps):
        v = 1 - 2 * (k + 0.5) / steps
        parts.append(
            f'<rect x="{cx}" y="{_TOP + k * ph / steps:.3f}" width="16" height="{ph / steps + 0.5:.3f}" '
            f'fill="{diverging_color(v)}"/>'
        )
    for v, y in ((1, _TOP), (0, _TOP + ph / 2), (-1, _TOP + ph)):
        parts.append(f'<text x="{cx + 22}" y="{y + 4}" font-size="11">{v:+d}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def curves_svg(curves: CurveSet, title: str | None = None) -> str:
    """Polylines of visibility against length, one per geometry."""
    x0, x1 = float(curves.lengths[0]), float(curves.lengths[-1])
    y0, y1 = -1.0, 1.0
    pw = _W - _LEFT - _RIGHT
    ph = _H - _TOP - _BOTTOM
    parts = _open()
    zero = _TOP + ph / 2
    parts.append(f'<line x1="{_LEFT}" y1="{zero}" x2="{_LEFT + pw}" y2="{zero}" stroke="#bbbbbb"/>')
    for n, g in enumerate(curves.configs):
        color = CURVE_COLORS[g.value]
        runs, current = [], []
        for l, v in zip(curves.lengths, curves.values[g]):
            if np.isnan(v):
                if current:
                    runs.append(current)
                current = []
                continue
            px = _LEFT + (l - x0) / (x1 - x0) * pw
            py = _TOP + ph - (min(max(v, y0), y1) - y0) / (y1 - y0) * ph
            current.append(f"{px:.2f},{py:.2f}")
        if current:
            runs.append(current)
        for run in runs:
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(run)}"/>')
        ly = _TOP + 14 + 16 * n
        parts.append(f'<line x1="{_W - _RIGHT + 8}" y1="{ly}" x2="{_W - _RIGHT + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{_W - _RIGHT + 28}" y="{ly + 4}" font-size="10">{g.value}</text>')
    gok = curves.gamma_over_kappa
    _frame(parts, x0, x1, y0, y1, "l", "V", title or f"γ/κ = {gok.real:g}{gok.imag:+g}i")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
