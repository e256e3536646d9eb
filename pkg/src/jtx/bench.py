"""Rate-distortion measurement: PSNR, corpus sweeps, CSV output, basis montages.

bpp counts every container byte (header, tables, CRC, payloads) against the
pixel count, so reported rates are honest end-to-end figures. Corpus results
are reduced in lexicographic file-name order, which keeps the CSV byte-exact
across runs and worker counts.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import blockxf, codec, pixmap
from .blockxf import TransformId
from .codec import EncodeParams
from .errors import JtxError
from .pixmap import Image


@dataclass(frozen=True)
class RdPoint:
    transform: TransformId
    quality: int
    bpp: float
    psnr: float


def psnr(a: Image, b: Image) -> float:
    """Peak signal-to-noise ratio in dB, MSE pooled over all channels."""
    if (a.width, a.height, a.channels) != (b.width, b.height, b.channels):
        raise ValueError("images must share dimensions and channel count")
    sse = 0.0
    for pa, pb in zip(a.planes, b.planes):
        d = pa.astype(np.float64) - pb.astype(np.float64)
        sse += float(np.dot(d.ravel(), d.ravel()))
    if sse == 0.0:
        return math.inf
    mse = sse / (a.width * a.height * a.channels)
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def measure(image: Image, transform: TransformId, quality: int, subsampling: int = 0) -> RdPoint:
    """Encode + decode one image and record its (bpp, psnr) point."""
    data = codec.encode(image, EncodeParams(transform, quality, subsampling))
    decoded = codec.decode(data)
    bpp = len(data) * 8.0 / (image.width * image.height)
    return RdPoint(transform, quality, bpp, psnr(image, decoded))


@dataclass
class SweepResult:
    transforms: tuple[TransformId, ...]
    qualities: tuple[int, ...]
    image_names: tuple[str, ...]
    # per_image[name][(transform, quality)] -> RdPoint
    per_image: dict[str, dict[tuple[TransformId, int], RdPoint]]
    failures: dict[str, str]

    def mean_points(self) -> list[RdPoint]:
        """Corpus-mean RdPoints sorted by (transform name, quality)."""
        out = []
        for tid in self.transforms:
            for q in self.qualities:
                pts = [self.per_image[n][(tid, q)] for n in self.image_names]
                out.append(
                    RdPoint(
                        tid,
                        q,
                        float(np.mean([p.bpp for p in pts])),
                        float(np.mean([p.psnr for p in pts])),
                    )
                )
        out.sort(key=lambda p: (p.transform.name.lower(), p.quality))
        return out

    def curve(self, tid: TransformId) -> list[RdPoint]:
        """Mean points of one transform sorted by bpp ascending."""
        pts = [p for p in self.mean_points() if p.transform == tid]
        pts.sort(key=lambda p: p.bpp)
        return pts


def rd_sweep(
    corpus: list[Path],
    transforms: list[TransformId],
    qualities: list[int],
    jobs: int = 1,
) -> SweepResult:
    """Encode + decode every (image, transform, quality) and pool the results."""
    paths = sorted(corpus, key=lambda p: p.name)
    if not paths:
        raise ValueError("empty corpus")

    def run_one(path: Path):
        image = pixmap.load_ppm(path.read_bytes())
        return {
            (tid, q): measure(image, tid, q) for tid in transforms for q in qualities
        }

    per_image: dict[str, dict] = {}
    failures: dict[str, str] = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {path.name: pool.submit(run_one, path) for path in paths}
        results = {name: f for name, f in futures.items()}
    else:
        results = {path.name: path for path in paths}

    for name in sorted(results):
        try:
            item = results[name]
            per_image[name] = item.result() if jobs > 1 else run_one(item)
        except (JtxError, OSError) as exc:
            failures[name] = str(exc)
    if not per_image:
        raise JtxError("no corpus image could be processed")
    return SweepResult(
        tuple(transforms), tuple(qualities), tuple(sorted(per_image)), per_image, failures
    )


def _fmt(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.6f}"


def points_to_csv(points: list[RdPoint]) -> str:
    rows = ["transform,quality,bpp,psnr"]
    for p in sorted(points, key=lambda p: (p.transform.name.lower(), p.quality)):
        rows.append(f"{p.transform.name.lower()},{p.quality},{_fmt(p.bpp)},{_fmt(p.psnr)}")
    return "\n".join(rows) + "\n"


def interpolate_at_rate(points: list[RdPoint], bpp: float) -> float:
    """PSNR linearly interpolated at the target rate; errors outside the span."""
    pts = sorted(points, key=lambda p: p.bpp)
    if len(pts) < 2:
        raise ValueError("need at least two points to interpolate")
    if not pts[0].bpp <= bpp <= pts[-1].bpp:
        raise ValueError(
            f"rate {bpp:.4f} outside curve span [{pts[0].bpp:.4f}, {pts[-1].bpp:.4f}]"
        )
    rates = [p.bpp for p in pts]
    i = max(0, min(np.searchsorted(rates, bpp) - 1, len(pts) - 2))
    lo, hi = pts[i], pts[i + 1]
    if hi.bpp == lo.bpp:
        return lo.psnr
    t = (bpp - lo.bpp) / (hi.bpp - lo.bpp)
    return lo.psnr + t * (hi.psnr - lo.psnr)


def basis_montage(tid: TransformId) -> Image:
    """All 64 basis blocks tiled 8x8 with 1-px gutters, per-block normalized."""
    if tid not in blockxf.MATRIX_TRANSFORMS:
        raise ValueError(f"{tid.name} has no 8x8 basis images")
    side = 8 * 8 + 7
    canvas = np.zeros((side, side), np.uint8)
    for m in range(8):
        for n in range(8):
            block = blockxf.basis_image(tid, m, n)
            lo, hi = block.min(), block.max()
            if hi - lo < 1e-12:
                tile = np.full((8, 8), 128, np.uint8)
            else:
                tile = np.clip(np.floor((block - lo) / (hi - lo) * 255.0 + 0.5), 0, 255)
                tile = tile.astype(np.uint8)
            canvas[m * 9 : m * 9 + 8, n * 9 : n * 9 + 8] = tile
    return Image(side, side, pixmap.GRAY, (canvas,))
