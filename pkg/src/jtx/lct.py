"""Local cosine transform: bell folding across block boundaries, then the DCT.

Ahead of the blockwise DCT, sample pairs straddling every interior 8-sample
boundary are mixed by a smooth bell so the effective basis functions overlap
adjacent blocks. For a boundary at column B and offsets n = 1..4, the pair
(f(-n), f(n)) = (plane[B-n], plane[B+n-1]) is replaced by

    f-(n) = (b(n) f(-n) - b(-n) f(n)) / (b(n) - b(-n))
    f+(n) = (b(n) f(n) - b(-n) f(-n)) / (b(n) - b(-n))

with b(n) = beta((2n+1)/8). Unfolding solves each 2x2 pair system exactly, so
the whole stage is perfectly invertible. Image outer boundaries are left
untouched. Folding is applied along rows first, then along columns.
"""
from __future__ import annotations

import numpy as np

from . import blockxf, pixmap
from .blockxf import TransformId


def bell(x: np.ndarray) -> np.ndarray:
    """Rising bell profile: 0 below -1, 1 above +1, (1+sin(pi x/2))/2 between."""
    x = np.asarray(x, np.float64)
    return np.where(x < -1.0, 0.0, np.where(x > 1.0, 1.0, (1.0 + np.sin(np.pi * x / 2.0)) / 2.0))


def _bell_weights() -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, 5, dtype=np.float64)
    return bell((2 * n + 1) / 8.0), bell((-2 * n + 1) / 8.0)


_B_POS, _B_NEG = _bell_weights()

# every per-pair 2x2 folding matrix must be invertible
if np.any(np.abs(_B_POS - _B_NEG) < 1e-9) or np.any(np.abs(_B_POS + _B_NEG) < 1e-9):
    raise AssertionError("bell weights produce a singular folding pair")


def _fold_last_axis(a: np.ndarray, inverse: bool) -> np.ndarray:
    out = a.copy()
    width = a.shape[-1]
    if width % 8:
        raise ValueError(f"plane extent {width} is not a multiple of 8")
    bounds = np.arange(8, width, 8)
    if bounds.size == 0:
        return out
    for i, n in enumerate(range(1, 5)):
        b, bn = _B_POS[i], _B_NEG[i]
        left = a[..., bounds - n]
        right = a[..., bounds + n - 1]
        if inverse:
            out[..., bounds - n] = (b * left + bn * right) / (b + bn)
            out[..., bounds + n - 1] = (b * right + bn * left) / (b + bn)
        else:
            out[..., bounds - n] = (b * left - bn * right) / (b - bn)
            out[..., bounds + n - 1] = (b * right - bn * left) / (b - bn)
    return out


def fold_plane(plane: np.ndarray) -> np.ndarray:
    """Fold all interior block boundaries, rows then columns."""
    a = np.asarray(plane, np.float64)
    return _fold_last_axis(_fold_last_axis(a, False).T, False).T


def unfold_plane(plane: np.ndarray) -> np.ndarray:
    """Exact inverse of fold_plane (columns then rows)."""
    a = np.asarray(plane, np.float64).T
    return _fold_last_axis(_fold_last_axis(a, True).T, True)


def lct_forward(plane: np.ndarray) -> np.ndarray:
    """Fold, then blockwise DCT; returns (n, 8, 8) coefficient blocks."""
    return blockxf.forward_blocks(TransformId.DCT, pixmap.to_blocks(fold_plane(plane)))


def lct_inverse(blocks: np.ndarray, height: int, width: int) -> np.ndarray:
    """Blockwise inverse DCT, then unfold; returns the reconstructed plane."""
    folded = pixmap.from_blocks(blockxf.inverse_blocks(TransformId.DCT, blocks), height, width)
    return unfold_plane(folded)
