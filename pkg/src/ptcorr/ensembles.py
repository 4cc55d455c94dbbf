"""Seeded random matrix ensembles used by the invariance checks.

All draws come from ``numpy.random.Generator(PCG64(seed))``. A batch of
``n`` draws is taken in one call so that the sample for trial ``k`` only
depends on ``(seed, n)``, not on how the trials are later evaluated.
"""

from __future__ import annotations

import numpy as np

BIT_GENERATOR = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def unit_disc(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex samples uniform in the closed unit disc.

    Real and imaginary parts are drawn uniformly on [-1, 1] and points
    outside the disc are rejected.
    """
    shape = tuple(int(k) for k in np.atleast_1d(shape))
    count = int(np.prod(shape, dtype=np.int64))
    out = np.empty(count, dtype=complex)
    filled = 0
    while filled < count:
        need = count - filled
        # acceptance rate is pi/4
        batch = int(need * 1.35) + 16
        z = rng.uniform(-1.0, 1.0, batch) + 1j * rng.uniform(-1.0, 1.0, batch)
        z = z[np.abs(z) <= 1.0][:need]
        out[filled:filled + len(z)] = z
        filled += len(z)
    return out.reshape(shape)


def unit_disc_matrices(rng: np.random.Generator, count: int, n: int = 2) -> np.ndarray:
    return unit_disc(rng, (count, n, n))


def haar_unitaries(rng: np.random.Generator, count: int, n: int = 2) -> np.ndarray:
    """Haar-distributed unitaries via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def shared_antidiagonal(rng: np.random.Generator, count: int, size: int) -> np.ndarray:
    """``count`` groups of ``size`` 2x2 matrices sharing one antidiagonal per group.

    Returns shape ``(count, size, 2, 2)``; diagonals are independent.
    """
    out = unit_disc(rng, (count, size, 2, 2))
    anti = unit_disc(rng, (count, 2))
    out[:, :, 0, 1] = anti[:, None, 0]
    out[:, :, 1, 0] = anti[:, None, 1]
    return out
