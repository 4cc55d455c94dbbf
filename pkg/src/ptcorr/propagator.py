"""Passive PT couplers, the 50:50 coupler and the four two-coupler geometries."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import EXCHANGE, IDENTITY, expm2, row_col_reverse, transpose

__all__ = [
    "CouplerParams",
    "Segment",
    "Geometry",
    "h_eff",
    "pt_propagator",
    "coupler_50_50",
    "building_block",
    "compose_geometry",
    "compose_geometry_grid",
    "propagate_piecewise",
    "parity_swap_reverse",
]

_SQRT_HALF = 1 / np.sqrt(2.0)


@dataclass(frozen=True)
class CouplerParams:
    """One PT coupler section.

    ``kappa`` and ``gamma`` share a unit of inverse length, ``length`` is in
    the matching length unit. ``gamma`` may be complex: a non-zero imaginary
    part models a detuning of the lossy guide.
    """

    kappa: float
    gamma: complex = 0.0
    length: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gamma", complex(self.gamma))
        if not np.isfinite(self.kappa) or self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not np.isfinite(self.length) or self.length < 0:
            raise ValueError(f"length must be non-negative, got {self.length}")
        if not np.isfinite(self.gamma) or self.gamma.real < 0:
            raise ValueError(f"gamma must have non-negative real part (passive), got {self.gamma}")

    @classmethod
    def normalized(cls, kl: float, gamma_over_kappa: complex) -> "CouplerParams":
        """Parameters with ``kappa = 1`` so that length equals ``kappa*l``."""
        return cls(kappa=1.0, gamma=gamma_over_kappa, length=kl)


@dataclass(frozen=True)
class Segment:
    """A constant-Hamiltonian stretch of a piecewise z-profile."""

    hamiltonian: np.ndarray
    length: float

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"segment length must be non-negative, got {self.length}")
        h = np.array(self.hamiltonian, dtype=complex)
        if h.shape != (2, 2):
            raise ValueError(f"segment hamiltonian must be 2x2, got {h.shape}")
        h.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)


class Geometry(str, enum.Enum):
    """The four concatenated arrangements of the building block ``M``."""

    M_XMTX = "m-xmtx"
    M_MT = "m-mt"
    MT_M = "mt-m"
    XMTX_M = "xmtx-m"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, value) -> "Geometry":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for g in cls:
            if key in (g.value, g.name.lower().replace("_", "-")):
                return g
        raise ValueError(f"unknown geometry {value!r}; choose from {[g.value for g in cls]}")


_LABELS = {
    Geometry.M_XMTX: "M (X M^T X)",
    Geometry.M_MT: "M M^T",
    Geometry.MT_M: "M^T M",
    Geometry.XMTX_M: "(X M^T X) M",
}


def h_eff(kappa: float, gamma) -> np.ndarray:
    """Effective Hamiltonian ``[[-i gamma, kappa], [kappa, 0]]``.

    The first guide carries the loss. ``gamma`` may be an array, in which
    case a stack of Hamiltonians is returned.
    """
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0):
        raise ValueError("kappa must be positive")
    gamma = np.asarray(gamma, dtype=complex)
    shape = np.broadcast_shapes(kappa.shape, gamma.shape)
    h = np.zeros(shape + (2, 2), dtype=complex)
    h[..., 0, 0] = -1j * gamma
    h[..., 0, 1] = kappa
    h[..., 1, 0] = kappa
    return h


def pt_propagator(p: CouplerParams) -> np.ndarray:
    """Post-selected (sub-unitary) transfer matrix ``exp(-i H_eff l)``."""
    return expm2(h_eff(p.kappa, p.gamma), p.length)


def coupler_50_50() -> np.ndarray:
    """Balanced directional coupler ``(1/sqrt 2) [[1, -i], [-i, 1]]``."""
    return _SQRT_HALF * np.array([[1, -1j], [-1j, 1]], dtype=complex)


def building_block(p: CouplerParams) -> np.ndarray:
    """``M = U R``: a 50:50 coupler followed by a PT coupler."""
    return pt_propagator(p) @ coupler_50_50()


def _compose(geometry: Geometry, m: np.ndarray) -> np.ndarray:
    if geometry is Geometry.M_XMTX:
        return m @ row_col_reverse(m)
    if geometry is Geometry.M_MT:
        return m @ transpose(m)
    if geometry is Geometry.MT_M:
        return transpose(m) @ m
    if geometry is Geometry.XMTX_M:
        return row_col_reverse(m) @ m
    raise ValueError(f"unknown geometry {geometry!r}")


def compose_geometry(geometry, p: CouplerParams) -> np.ndarray:
    """Transfer matrix of one of the four arrangements of ``M = U R``.

    No global phase is removed; the result is the raw matrix product.
    """
    return _compose(Geometry.parse(geometry), building_block(p))


def compose_geometry_grid(geometry, kl, gamma_over_kappa) -> np.ndarray:
    """Vectorized :func:`compose_geometry` at ``kappa = 1``.

    ``kl`` and ``gamma_over_kappa`` broadcast together; the result has shape
    ``broadcast_shape + (2, 2)``.
    """
    kl = np.asarray(kl, dtype=float)
    gok = np.asarray(gamma_over_kappa, dtype=complex)
    if np.any(kl < 0):
        raise ValueError("kappa*l must be non-negative")
    if np.any(gok.real < 0):
        raise ValueError("gamma/kappa must have non-negative real part")
    kl, gok = np.broadcast_arrays(kl, gok)
    m = expm2(h_eff(1.0, gok), kl) @ coupler_50_50()
    return _compose(Geometry.parse(geometry), m)


def propagate_piecewise(segments: Sequence[Segment]) -> np.ndarray:
    """Time-ordered product over piecewise-constant segments.

    The first segment acts first, so later segments multiply from the left.
    """
    out = np.array(IDENTITY)
    for seg in segments:
        out = expm2(seg.hamiltonian, seg.length) @ out
    return out


def parity_swap_reverse(segments: Sequence[Segment]) -> list[Segment]:
    """Reverse the segment order and swap the two modes in each Hamiltonian.

    For symmetric Hamiltonians the propagator of the result is
    ``X P^T X`` where ``P`` is the propagator of ``segments``.
    """
    return [Segment(EXCHANGE @ s.hamiltonian @ EXCHANGE, s.length) for s in reversed(segments)]
