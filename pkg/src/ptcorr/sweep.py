"""Visibility landscapes over (kappa*l, gamma/kappa) and visibility-vs-length curves."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .correlations import P_DIST_FLOOR, p11_dist, p11_indist
from .propagator import Geometry, compose_geometry_grid

__all__ = [
    "KAPPA_DEFAULT",
    "VisibilityGrid",
    "CurveSet",
    "Features",
    "axis",
    "geometry_visibility",
    "geometry_deficit",
    "visibility_map",
    "visibility_curves",
    "extract_features",
]

# coupling of the fabricated couplers, 1/cm
KAPPA_DEFAULT = 0.85


def axis(lo: float, hi: float, steps: int) -> np.ndarray:
    """Inclusive linear axis with ``steps`` nodes."""
    if int(steps) != steps or steps < 2:
        raise ValueError(f"an axis needs at least 2 steps, got {steps}")
    if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
        raise ValueError(f"axis bounds must satisfy min < max, got [{lo}, {hi}]")
    return np.linspace(lo, hi, int(steps))


def geometry_visibility(geometry, kl, gamma_over_kappa, floor: float = P_DIST_FLOOR) -> np.ndarray:
    """Visibility of a geometry on broadcast (kappa*l, gamma/kappa) arrays."""
    t = compose_geometry_grid(geometry, kl, gamma_over_kappa)
    p_ind = p11_indist(t)
    p_dist = p11_dist(t)
    ok = p_dist > floor
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ok, p_ind / np.where(ok, p_dist, 1.0) - 1.0, np.nan)


def geometry_deficit(geometry, kl, gamma_over_kappa, floor: float = P_DIST_FLOOR) -> np.ndarray:
    """``1 - V`` evaluated without cancellation.

    Uses ``2 perm|T|^2 - |perm T|^2 = |det T|^2`` and ``det T = det(M)^2
    = exp(-2 (gamma/kappa) kappa l)`` for every geometry, so the deficit
    stays accurate where V rounds to 1.
    """
    kl = np.asarray(kl, dtype=float)
    gok = np.asarray(gamma_over_kappa, dtype=complex)
    t = compose_geometry_grid(geometry, kl, gok)
    p_dist = p11_dist(t)
    det_sq = np.exp(-4.0 * gok.real * kl)
    ok = p_dist > floor
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ok, det_sq / np.where(ok, p_dist, 1.0), np.nan)


@dataclass
class VisibilityGrid:
    """Visibility over a (kappa*l, gamma/kappa) grid.

    ``values`` has shape ``(len(gok_axis), len(kl_axis))`` so that flattening
    in C order runs kappa*l fastest. NaN marks nodes with undefined V.
    """

    config: Geometry
    kl_axis: np.ndarray
    gok_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.config = Geometry.parse(self.config)
        self.kl_axis = np.asarray(self.kl_axis, dtype=float)
        self.gok_axis = np.asarray(self.gok_axis, dtype=complex)
        self.values = np.asarray(self.values, dtype=float).reshape(len(self.gok_axis), len(self.kl_axis))

    def row(self, gamma_over_kappa) -> np.ndarray:
        i = int(np.argmin(np.abs(self.gok_axis - gamma_over_kappa)))
        return self.values[i]

    def to_dict(self) -> dict:
        return {
            "config": self.config.value,
            "kl_axis": self.kl_axis.tolist(),
            "gok_axis": [[z.real, z.imag] for z in self.gok_axis.tolist()],
            "values": [None if np.isnan(v) else v for v in self.values.ravel().tolist()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VisibilityGrid":
        return cls(
            config=d["config"],
            kl_axis=d["kl_axis"],
            gok_axis=[complex(re, im) for re, im in d["gok_axis"]],
            values=[np.nan if v is None else v for v in d["values"]],
        )


@dataclass
class CurveSet:
    """Visibility against physical length for several geometries at one loss."""

    configs: list
    gamma_over_kappa: complex
    kappa: float
    lengths: np.ndarray
    values: dict = field(default_factory=dict)
    indistinguishability: float = 1.0

    def __post_init__(self):
        self.configs = [Geometry.parse(c) for c in self.configs]
        self.gamma_over_kappa = complex(self.gamma_over_kappa)
        self.lengths = np.asarray(self.lengths, dtype=float)
        self.values = {Geometry.parse(k): np.asarray(v, dtype=float) for k, v in self.values.items()}
        for g in self.configs:
            if g not in self.values or self.values[g].shape != self.lengths.shape:
                raise ValueError(f"curve for {g.value} missing or mismatched in length")

    def to_dict(self) -> dict:
        return {
            "configs": [g.value for g in self.configs],
            "gamma_over_kappa": [self.gamma_over_kappa.real, self.gamma_over_kappa.imag],
            "kappa": self.kappa,
            "lengths": self.lengths.tolist(),
            "indistinguishability": self.indistinguishability,
            "values": {
                g.value: [None if np.isnan(v) else v for v in self.values[g].tolist()] for g in self.configs
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CurveSet":
        return cls(
            configs=d["configs"],
            gamma_over_kappa=complex(*d["gamma_over_kappa"]),
            kappa=float(d["kappa"]),
            lengths=d["lengths"],
            indistinguishability=float(d["indistinguishability"]),
            values={k: [np.nan if v is None else v for v in vals] for k, vals in d["values"].items()},
        )


def visibility_map(config, kl_range, gok_range, gok_imag: float = 0.0,
                   floor: float = P_DIST_FLOOR) -> VisibilityGrid:
    """Visibility of one geometry on a kappa*l x gamma/kappa grid (kappa = 1).

    ``kl_range`` and ``gok_range`` are ``(min, max, steps)`` triples; the loss
    axis runs along the real line, shifted by ``gok_imag`` if given.
    """
    kl = axis(*kl_range)
    if kl[0] < 0:
        raise ValueError("kappa*l must be non-negative")
    gok = axis(*gok_range) + 1j * gok_imag
    values = geometry_visibility(config, kl[None, :], gok[:, None], floor)
    return VisibilityGrid(config, kl, gok, values)


def visibility_curves(configs, gamma_over_kappa, lengths, kappa: float = KAPPA_DEFAULT,
                      indistinguishability: float = 1.0) -> CurveSet:
    """Visibility against physical length, scaled by the pair indistinguishability."""
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    x = float(indistinguishability)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"indistinguishability must lie in [0, 1], got {x}")
    lengths = np.asarray(lengths, dtype=float)
    if lengths.ndim != 1 or np.any(lengths < 0):
        raise ValueError("lengths must be a 1-d array of non-negative values")
    configs = [Geometry.parse(c) for c in configs]
    gok = complex(gamma_over_kappa)
    values = {g: x * geometry_visibility(g, kappa * lengths, gok) for g in configs}
    return CurveSet(configs, gok, float(kappa), lengths, values, x)


@dataclass
class Features:
    minima: list
    maxima: list
    zero_crossings: list
    monotonic_tail: bool

    def first_minimum(self):
        return self.minima[0] if self.minima else None


def _refine(x, v, i):
    """Vertex of the parabola through samples i-1, i, i+1 (uniform spacing)."""
    y0, y1, y2 = v[i - 1], v[i], v[i + 1]
    denom = y0 - 2 * y1 + y2
    h = x[i + 1] - x[i]
    if denom == 0:
        return float(x[i]), float(y1)
    off = 0.5 * (y0 - y2) / denom
    off = min(max(off, -1.0), 1.0)
    return float(x[i] + off * h), float(y1 - 0.25 * (y0 - y2) * off)


def extract_features(x, v, deficit=None, zero_tol: float = 1e-12) -> Features:
    """Locate extrema, sign changes and a monotone broken-phase tail.

    Extrema are refined by three-point quadratic interpolation and returned as
    ``(position, value)`` pairs; zero crossings are linear interpolations
    between samples whose signs differ beyond ``zero_tol``. NaN samples split
    the curve and are never treated as extrema.

    ``monotonic_tail`` is True when the curve rises strictly from its last
    minimum to the end of the axis and that stretch spans at least half the
    axis. If ``deficit`` (``1 - V`` computed accurately) is supplied, the
    strict rise is judged on it instead of on ``v``, which saturates at 1 in
    floating point.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if x.shape != v.shape or x.ndim != 1:
        raise ValueError("x and v must be 1-d arrays of equal length")
    if len(v) < 3:
        raise ValueError("need at least 3 samples")
    finite = np.isfinite(v)
    if not np.any(finite):
        raise ValueError("all samples are undefined")

    minima, maxima = [], []
    for i in range(1, len(v) - 1):
        if not (finite[i - 1] and finite[i] and finite[i + 1]):
            continue
        if v[i] < v[i - 1] and v[i] <= v[i + 1]:
            minima.append(_refine(x, v, i))
        elif v[i] > v[i - 1] and v[i] >= v[i + 1]:
            maxima.append(_refine(x, v, i))

    crossings = []
    sign = np.where(v > zero_tol, 1, np.where(v < -zero_tol, -1, 0))
    last = None
    for i in range(len(v)):
        if not finite[i]:
            last = None
            continue
        if sign[i] == 0:
            continue
        if last is not None and sign[i] != sign[last]:
            x0, x1, y0, y1 = x[last], x[i], v[last], v[i]
            crossings.append(float(x0 - y0 * (x1 - x0) / (y1 - y0)))
        last = i

    trend = -np.asarray(deficit, dtype=float) if deficit is not None else v
    start = 0
    for i in range(len(trend) - 2, 0, -1):
        w = trend[i - 1:i + 2]
        if np.all(np.isfinite(w)) and w[1] < w[0] and w[1] <= w[2]:
            start = i
            break
    tail = trend[start:]
    span = (x[-1] - x[start]) / (x[-1] - x[0])
    monotonic = bool(np.all(np.isfinite(tail)) and np.all(np.diff(tail) > 0) and span >= 0.5)
    return Features(minima, maxima, crossings, monotonic)
