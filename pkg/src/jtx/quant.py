"""Quantization tables, quality scaling, and coefficient (de)quantization."""
from __future__ import annotations

import numpy as np

from .errors import CoefficientOverflowError

# The classic example luminance/chrominance tables; locked by checksum in tests.
LUMA_TABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int32,
)
CHROMA_TABLE = np.array(
    [
        [17, 18, 24, 47, 99, 99, 99, 99],
        [18, 21, 26, 66, 99, 99, 99, 99],
        [24, 26, 56, 99, 99, 99, 99, 99],
        [47, 66, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
    ],
    dtype=np.int32,
)
LUMA_TABLE.setflags(write=False)
CHROMA_TABLE.setflags(write=False)

# largest magnitude the run-length symbolizer can represent (category 15)
_MAX_QUANTIZED = (1 << 15) - 1


def default_tables() -> tuple[np.ndarray, np.ndarray]:
    """(luma, chroma) divisor tables at the nominal quality of 50."""
    return LUMA_TABLE, CHROMA_TABLE


def scale_table(table: np.ndarray, quality: int) -> np.ndarray:
    """Scale divisors for a quality in 1..100 (50 = identity, 100 = all ones)."""
    if not 1 <= quality <= 100:
        raise ValueError(f"quality {quality} out of range 1..100")
    s = 5000.0 / quality if quality < 50 else 200.0 - 2.0 * quality
    scaled = np.floor(table.astype(np.float64) * s / 100.0 + 0.5)
    return np.clip(scaled, 1, 255).astype(np.int32)


def quantize(blocks: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Divide by the table and round half away from zero."""
    x = np.asarray(blocks, np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite coefficient")
    q = np.copysign(np.floor(np.abs(x) / table + 0.5), x)
    if np.abs(q).max(initial=0.0) > _MAX_QUANTIZED:
        raise CoefficientOverflowError(
            f"coefficient overflow: |{q.flat[np.abs(q).argmax()]:.0f}| exceeds {_MAX_QUANTIZED}"
        )
    return q.astype(np.int32)


def dequantize(blocks: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Multiply quantized integers back onto the divisor lattice."""
    return np.asarray(blocks, np.float64) * table
