"""Two-photon correlations in concatenated PT-symmetric two-mode networks."""

__version__ = "0.1.0"

from .correlations import TwoPhotonResult, p11_dist, p11_indist, two_photon, visibility, visibility_partial
from .linalg import expm2, hadamard_abs_square, perm2, permanent, row_col_reverse
from .propagator import (
    CouplerParams,
    Geometry,
    building_block,
    compose_geometry,
    coupler_50_50,
    h_eff,
    pt_propagator,
)

__all__ = [
    "__version__",
    "CouplerParams",
    "Geometry",
    "TwoPhotonResult",
    "building_block",
    "compose_geometry",
    "coupler_50_50",
    "expm2",
    "h_eff",
    "hadamard_abs_square",
    "p11_dist",
    "p11_indist",
    "perm2",
    "permanent",
    "pt_propagator",
    "row_col_reverse",
    "two_photon",
    "visibility",
    "visibility_partial",
]
