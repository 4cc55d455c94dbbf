"""Small exact complex matrix algebra for two-mode (and few-mode) networks.

All 2x2 routines accept either a single ``(2, 2)`` array or a stack of shape
``(..., 2, 2)`` and operate on the trailing two axes. Inputs are never
modified; every function returns a fresh array.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

__all__ = [
    "IDENTITY",
    "EXCHANGE",
    "DEFAULT_PERM_CAP",
    "PermanentSizeError",
    "as_mat2",
    "matmul",
    "transpose",
    "row_col_reverse",
    "perm2",
    "permanent",
    "permanent_naive",
    "hadamard_abs_square",
    "expm2",
    "rel_residual",
]

IDENTITY = np.eye(2, dtype=complex)
IDENTITY.setflags(write=False)

EXCHANGE = np.array([[0, 1], [1, 0]], dtype=complex)
EXCHANGE.setflags(write=False)

DEFAULT_PERM_CAP = 12

# |mu t| below this uses the Taylor branch for cos and sinc
_SINC_SWITCH = 1e-6


class PermanentSizeError(ValueError):
    """Raised when a permanent is requested above the configured size cap."""


def as_mat2(m) -> np.ndarray:
    """Coerce ``m`` to a complex array with trailing shape (2, 2).

    Rejects non-finite entries.
    """
    a = np.asarray(m, dtype=complex)
    if a.shape[-2:] != (2, 2):
        raise ValueError(f"expected trailing shape (2, 2), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product ``a @ b`` with the order kept exactly as written."""
    return np.matmul(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def transpose(m) -> np.ndarray:
    return np.swapaxes(np.asarray(m, dtype=complex), -1, -2).copy()


def row_col_reverse(m) -> np.ndarray:
    """Return ``X m^T X``, i.e. swap the two diagonal entries.

    The antidiagonal is left untouched::

        [[m11, m12],      [[m22, m12],
         [m21, m22]]  ->   [m21, m11]]
    """
    m = np.asarray(m, dtype=complex)
    out = m.copy()
    out[..., 0, 0] = m[..., 1, 1]
    out[..., 1, 1] = m[..., 0, 0]
    return out


def perm2(m):
    """Permanent ``m11 m22 + m12 m21`` of a 2x2 matrix (or of each in a stack)."""
    m = np.asarray(m)
    return m[..., 0, 0] * m[..., 1, 1] + m[..., 0, 1] * m[..., 1, 0]


def permanent_naive(m) -> complex:
    """Permanent by summing over all n! permutations.

    Only meant for small n; kept as a reference for the Ryser kernel.
    """
    a = np.asarray(m, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    rows = np.arange(n)
    total = 0j
    for cols in permutations(range(n)):
        total += np.prod(a[rows, list(cols)])
    return complex(total)


def permanent(m, cap: int = DEFAULT_PERM_CAP) -> complex:
    """Permanent of a square complex matrix.

    Uses Ryser's inclusion-exclusion formula, walking the column subsets in
    Gray-code order so each step updates the row sums with a single column
    add or remove. Cost is O(2^n n).

    Parameters
    ----------
    m : array_like, shape (n, n)
    cap : int
        Largest admitted dimension.

    Raises
    ------
    PermanentSizeError
        If ``n > cap``.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > cap:
        raise PermanentSizeError(f"permanent of {n}x{n} exceeds cap {cap}")
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(a[0, 0])
    if n == 2:
        return complex(perm2(a))

    row_sums = np.zeros(n, dtype=complex)
    in_set = np.zeros(n, dtype=bool)
    total = 0j
    sign = -1.0 if n % 2 else 1.0  # (-1)^(n - |S|) with |S| = 0
    for k in range(1, 1 << n):
        # bit that flips between gray(k-1) and gray(k)
        j = (k & -k).bit_length() - 1
        if in_set[j]:
            row_sums -= a[:, j]
        else:
            row_sums += a[:, j]
        in_set[j] = not in_set[j]
        sign = -sign
        total += sign * np.prod(row_sums)
    return complex(total)


def hadamard_abs_square(m) -> np.ndarray:
    """Entrywise ``|m_ij|^2`` (the Hadamard product of m with its conjugate)."""
    a = np.asarray(m)
    return (a.real**2 + a.imag**2).astype(float)


def _cos_sinc(z2):
    """cos(z) and sin(z)/z given z**2, continuous through z = 0."""
    z2 = np.asarray(z2, dtype=complex)
    small = np.abs(z2) < _SINC_SWITCH**2
    z = np.sqrt(np.where(small, 1.0, z2))
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.cos(z)
        s = np.sin(z) / z
    c_taylor = 1 - z2 / 2 + z2**2 / 24 - z2**3 / 720
    s_taylor = 1 - z2 / 6 + z2**2 / 120 - z2**3 / 5040
    return np.where(small, c_taylor, c), np.where(small, s_taylor, s)


def expm2(h, t) -> np.ndarray:
    """Closed-form ``exp(-i h t)`` for 2x2 ``h``.

    With ``h = (tr h / 2) I + A`` and ``A`` traceless, ``A^2 = mu^2 I`` where
    ``mu^2 = -det A``, so

        exp(-i h t) = exp(-i tr(h) t / 2) [cos(mu t) I - i t sinc(mu t) A].

    Only ``mu^2`` enters, so there is no square-root branch choice and the
    result is continuous through ``mu = 0`` (the exceptional point).

    ``h`` may be a stack ``(..., 2, 2)`` and ``t`` a scalar or an array that
    broadcasts against the stack's leading shape.
    """
    h = np.asarray(h, dtype=complex)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("evolution length must be non-negative")
    half_tr = (h[..., 0, 0] + h[..., 1, 1]) / 2
    a = h - half_tr[..., None, None] * IDENTITY
    mu2 = -(a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0])
    c, s = _cos_sinc(mu2 * t**2)
    phase = np.exp(-1j * half_tr * t)
    ts = (t * s)[..., None, None]
    out = c[..., None, None] * IDENTITY - 1j * ts * a
    return phase[..., None, None] * out


def rel_residual(a, b):
    """Mixed absolute/relative mismatch ``|a - b| / max(1, |a|, |b|)``.

    Elementwise over arrays.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return np.abs(a - b) / scale
