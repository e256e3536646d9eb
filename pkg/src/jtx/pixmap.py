"""Image I/O (binary PPM/PGM), color conversion, subsampling, padding, tiling.

Images are planar: one uint8 array of shape (height, width) per channel.
All sample-domain math below runs in float64; conversion back to uint8
rounds half up and clamps to [0, 255].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PpmError

GRAY = "gray"
RGB = "rgb"
YCBCR = "ycbcr"


@dataclass(eq=False)
class Image:
    width: int
    height: int
    colorspace: str
    planes: tuple[np.ndarray, ...]

    @property
    def channels(self) -> int:
        return len(self.planes)


def _to_u8(a: np.ndarray) -> np.ndarray:
    # round half up, clamp to the 8-bit range
    return np.clip(np.floor(a + 0.5), 0, 255).astype(np.uint8)


def _next_token(data: bytes, off: int) -> tuple[bytes, int]:
    """Read one whitespace-delimited header token, skipping '#' comments."""
    n = len(data)
    while off < n:
        c = data[off]
        if c in b"#":
            while off < n and data[off] not in b"\n":
                off += 1
        elif c in b" \t\r\n\x0b\x0c":
            off += 1
        else:
            break
    start = off
    while off < n and data[off] not in b" \t\r\n\x0b\x0c":
        off += 1
    if start == off:
        raise PpmError("truncated header")
    return data[start:off], off


def _header_int(data: bytes, off: int, field: str) -> tuple[int, int]:
    token, off = _next_token(data, off)
    if not token.isdigit():
        raise PpmError(f"invalid {field}: {token!r}")
    return int(token), off


def load_ppm(data: bytes) -> Image:
    """Parse a binary PGM (P5) or PPM (P6) with maxval 255."""
    if len(data) < 2:
        raise PpmError("truncated header: no magic")
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise PpmError(f"unsupported magic {magic!r} (expected P5 or P6)")
    width, off = _header_int(data, 2, "width")
    height, off = _header_int(data, off, "height")
    maxval, off = _header_int(data, off, "maxval")
    if width < 1 or height < 1:
        raise PpmError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise PpmError(f"unsupported maxval {maxval} (only 255)")
    off += 1  # single whitespace byte after maxval
    channels = 3 if magic == b"P6" else 1
    expected = width * height * channels
    payload = data[off : off + expected]
    if len(payload) < expected:
        raise PpmError(f"truncated pixel data: expected {expected} bytes, got {len(payload)}")
    samples = np.frombuffer(payload, np.uint8).reshape(height, width, channels)
    planes = tuple(samples[:, :, c].copy() for c in range(channels))
    return Image(width, height, RGB if channels == 3 else GRAY, planes)


def save_ppm(image: Image) -> bytes:
    """Serialize to canonical binary PPM/PGM; RGB or grayscale only."""
    if image.colorspace == YCBCR:
        raise ValueError("image is tagged YCbCr; convert to RGB before saving")
    magic = b"P6" if image.channels == 3 else b"P5"
    header = magic + b"\n%d %d\n255\n" % (image.width, image.height)
    return header + np.stack(image.planes, axis=-1).tobytes()


def rgb_to_ycbcr(image: Image) -> Image:
    """Full-range BT.601/JFIF conversion, rounded and clamped per channel."""
    if image.colorspace != RGB:
        raise ValueError(f"expected an RGB image, got {image.colorspace}")
    r, g, b = (p.astype(np.float64) for p in image.planes)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b
    return Image(image.width, image.height, YCBCR, tuple(_to_u8(p) for p in (y, cb, cr)))


def ycbcr_to_rgb(image: Image) -> Image:
    """Exact inverse of the conversion matrix, rounded and clamped."""
    if image.colorspace != YCBCR:
        raise ValueError(f"expected a YCbCr image, got {image.colorspace}")
    y, cb, cr = (p.astype(np.float64) for p in image.planes)
    r = y + 2.0 * (1.0 - 0.299) * (cr - 128.0)
    b = y + 2.0 * (1.0 - 0.114) * (cb - 128.0)
    g = (y - 0.299 * r - 0.114 * b) / 0.587
    return Image(image.width, image.height, RGB, tuple(_to_u8(p) for p in (r, g, b)))


def subsample_420(plane: np.ndarray) -> np.ndarray:
    """Halve both dimensions by 2x2 mean; odd edges replicate the last row/column."""
    a = np.asarray(plane, np.float64)
    if a.shape[0] % 2:
        a = np.vstack([a, a[-1:]])
    if a.shape[1] % 2:
        a = np.hstack([a, a[:, -1:]])
    return (a[0::2, 0::2] + a[0::2, 1::2] + a[1::2, 0::2] + a[1::2, 1::2]) / 4.0


def upsample_420(plane: np.ndarray) -> np.ndarray:
    """Double both dimensions by sample replication."""
    return np.repeat(np.repeat(plane, 2, axis=0), 2, axis=1)


def level_shift(plane: np.ndarray) -> np.ndarray:
    return np.asarray(plane, np.float64) - 128.0


def unshift(plane: np.ndarray) -> np.ndarray:
    return _to_u8(np.asarray(plane, np.float64) + 128.0)


def pad_to_blocks(plane: np.ndarray) -> np.ndarray:
    """Grow both dimensions to multiples of 8 by edge replication."""
    h, w = plane.shape
    return np.pad(plane, ((0, -h % 8), (0, -w % 8)), mode="edge")


def to_blocks(plane: np.ndarray) -> np.ndarray:
    """Tile a plane with dims multiple of 8 into (n, 8, 8) blocks, row-major."""
    h, w = plane.shape
    if h % 8 or w % 8:
        raise ValueError(f"plane dims {w}x{h} are not multiples of 8")
    return plane.reshape(h // 8, 8, w // 8, 8).transpose(0, 2, 1, 3).reshape(-1, 8, 8)


def from_blocks(blocks: np.ndarray, height: int, width: int) -> np.ndarray:
    """Inverse of to_blocks."""
    bh, bw = height // 8, width // 8
    return blocks.reshape(bh, bw, 8, 8).transpose(0, 2, 1, 3).reshape(height, width)
