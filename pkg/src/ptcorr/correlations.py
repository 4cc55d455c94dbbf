"""Post-selected two-photon coincidence statistics of a 2x2 transfer matrix.

Probabilities are per injected |1,1> pair and are not renormalized by the
pair survival probability. Visibility is NaN wherever the distinguishable
coincidence probability vanishes; it is never reported as 0 in that case.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .linalg import hadamard_abs_square, perm2

__all__ = [
    "P_DIST_FLOOR",
    "TwoPhotonResult",
    "p11_indist",
    "p11_dist",
    "visibility",
    "visibility_partial",
    "two_photon",
]

P_DIST_FLOOR = 1e-300


def p11_indist(t):
    """Coincidence probability ``|perm T|^2`` for indistinguishable photons."""
    return np.abs(perm2(t)) ** 2


def p11_dist(t):
    """Coincidence probability ``perm |T|^2`` for distinguishable photons."""
    return perm2(hadamard_abs_square(t))


def _ratio_minus_one(p_ind, p_dist, floor):
    p_ind = np.asarray(p_ind, dtype=float)
    p_dist = np.asarray(p_dist, dtype=float)
    defined = p_dist > floor
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(defined, p_ind / np.where(defined, p_dist, 1.0) - 1.0, np.nan)
    return v if v.ndim else float(v)


def visibility(t, floor: float = P_DIST_FLOOR):
    """Two-photon visibility ``P_indist / P_dist - 1``.

    -1 is a complete HOM dip, positive values mean antibunching. Returns NaN
    where ``P_dist <= floor``. Works on a single matrix or on a stack.
    """
    return _ratio_minus_one(p11_indist(t), p11_dist(t), floor)


def visibility_partial(t, indistinguishability: float, floor: float = P_DIST_FLOOR):
    """Visibility for a pair with indistinguishability ``x`` in [0, 1].

    The measured coincidence rate is modelled as the convex mixture
    ``x P_indist + (1 - x) P_dist``, which gives ``x * V``.
    """
    x = float(indistinguishability)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"indistinguishability must lie in [0, 1], got {x}")
    return x * visibility(t, floor)


@dataclass(frozen=True)
class TwoPhotonResult:
    p_indist: float
    p_dist: float
    visibility: float | None

    @property
    def defined(self) -> bool:
        return self.visibility is not None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TwoPhotonResult":
        v = d["visibility"]
        return cls(float(d["p_indist"]), float(d["p_dist"]), None if v is None else float(v))


def two_photon(t, indistinguishability: float = 1.0, floor: float = P_DIST_FLOOR) -> TwoPhotonResult:
    """All two-photon observables of a single 2x2 transfer matrix."""
    p_ind = float(p11_indist(t))
    p_dist = float(p11_dist(t))
    v = visibility_partial(t, indistinguishability, floor)
    return TwoPhotonResult(p_ind, p_dist, None if np.isnan(v) else float(v))
