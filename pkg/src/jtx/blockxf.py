"""The 8x8 matrix-backed block transforms and their orthonormal bases.

Five transforms are expressed as orthonormal 8x8 matrices (DCT-II, DST-VII,
Hartley, sequency-ordered Walsh-Hadamard, discrete Chebyshev) and applied
separably in 2-D: forward X = M x M^T, inverse x = M^T X M. The remaining
transform ids are plane-level (folding or wavelet lifting) and live in the
lct and wavelets modules.
"""
from __future__ import annotations

from enum import IntEnum

import numpy as np

N = 8


class TransformId(IntEnum):
    """Transform selector; the integer value is the container wire encoding."""

    DCT = 0
    DST7 = 1
    DHT = 2
    WHT = 3
    DCHT = 4
    LCT = 5
    DWT53 = 6
    DWT97 = 7
    RB53 = 8
    RB97 = 9

    @classmethod
    def from_name(cls, name: str) -> "TransformId":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown transform {name!r}") from None


MATRIX_TRANSFORMS = frozenset(
    {TransformId.DCT, TransformId.DST7, TransformId.DHT, TransformId.WHT, TransformId.DCHT}
)
PLANE_TRANSFORMS = frozenset(TransformId) - MATRIX_TRANSFORMS


def _dct_matrix() -> np.ndarray:
    k = np.arange(N, dtype=np.float64)
    m = k[:, None]
    mat = np.cos(np.pi * (k + 0.5) * m / N)
    mat[0] *= np.sqrt(1.0 / N)
    mat[1:] *= np.sqrt(2.0 / N)
    return mat


def _dst7_matrix() -> np.ndarray:
    # kernel sin(pi*(k+1)*(m+1/2)/(N+1/2)); rows share a common norm
    k = np.arange(N, dtype=np.float64)
    m = k[:, None]
    mat = np.sin(np.pi * (k + 1.0) * (m + 0.5) / (N + 0.5))
    return mat / np.linalg.norm(mat, axis=1, keepdims=True)


def _dht_matrix() -> np.ndarray:
    # cas(a) = cos(a) + sin(a); the unscaled matrix is an involution up to N
    k = np.arange(N, dtype=np.float64)
    arg = 2.0 * np.pi * k[:, None] * k / N
    return (np.cos(arg) + np.sin(arg)) / np.sqrt(N)


def _wht_matrix() -> np.ndarray:
    h = np.array([[1.0]])
    while h.shape[0] < N:
        h = np.block([[h, h], [h, -h]])
    sequency = (np.diff(h, axis=1) != 0).sum(axis=1)
    return h[np.argsort(sequency)] / np.sqrt(N)


def _dcht_matrix() -> np.ndarray:
    # discrete orthonormal Chebyshev polynomials on the grid {0..7}, built by
    # the three-term recurrence; rows re-normalized to unit length
    x = np.arange(N, dtype=np.float64)
    t = np.zeros((N, N))
    t[0] = 1.0 / np.sqrt(N)
    t[1] = (2.0 * x + 1.0 - N) * np.sqrt(3.0 / (N * (N * N - 1.0)))
    for p in range(2, N):
        a1 = (2.0 / p) * np.sqrt((4.0 * p * p - 1.0) / (N * N - p * p))
        a2 = ((1.0 - N) / p) * np.sqrt((4.0 * p * p - 1.0) / (N * N - p * p))
        a3 = ((p - 1.0) / p) * np.sqrt((2.0 * p + 1.0) / (2.0 * p - 3.0))
        a3 *= np.sqrt((N * N - (p - 1.0) ** 2) / (N * N - p * p))
        t[p] = (a1 * x + a2) * t[p - 1] - a3 * t[p - 2]
    return t / np.linalg.norm(t, axis=1, keepdims=True)


_MATRICES: dict[TransformId, np.ndarray] = {
    TransformId.DCT: _dct_matrix(),
    TransformId.DST7: _dst7_matrix(),
    TransformId.DHT: _dht_matrix(),
    TransformId.WHT: _wht_matrix(),
    TransformId.DCHT: _dcht_matrix(),
}
for _m in _MATRICES.values():
    _m.setflags(write=False)


def build_matrix(tid: TransformId) -> np.ndarray:
    """Return the 8x8 orthonormal basis matrix (rows = basis vectors)."""
    try:
        return _MATRICES[tid]
    except KeyError:
        raise ValueError(f"{tid.name} is not a matrix-backed transform") from None


def _check_finite(block: np.ndarray) -> None:
    if not np.all(np.isfinite(block)):
        raise ValueError("non-finite sample in block")


def forward_blocks(tid: TransformId, blocks: np.ndarray) -> np.ndarray:
    """Forward transform a batch of (n, 8, 8) blocks."""
    m = build_matrix(tid)
    _check_finite(blocks)
    return np.einsum("mk,bkl,nl->bmn", m, blocks, m, optimize=True)


def inverse_blocks(tid: TransformId, blocks: np.ndarray) -> np.ndarray:
    """Inverse transform a batch of (n, 8, 8) coefficient blocks."""
    m = build_matrix(tid)
    _check_finite(blocks)
    return np.einsum("km,bmn,ln->bkl", m, blocks, m, optimize=True)


def forward_block(tid: TransformId, block: np.ndarray) -> np.ndarray:
    return forward_blocks(tid, np.asarray(block, np.float64)[None])[0]


def inverse_block(tid: TransformId, block: np.ndarray) -> np.ndarray:
    return inverse_blocks(tid, np.asarray(block, np.float64)[None])[0]


def basis_image(tid: TransformId, m: int, n: int) -> np.ndarray:
    """Outer product of basis rows m and n; (0, 0) is the DC basis block."""
    if not (0 <= m < N and 0 <= n < N):
        raise ValueError(f"basis index ({m}, {n}) out of range")
    mat = build_matrix(tid)
    return np.outer(mat[m], mat[n])
