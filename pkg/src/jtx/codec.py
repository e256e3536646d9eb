"""End-to-end encode/decode pipelines: color, transform, quantize, entropy."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import blockxf, entropy, lct, pixmap, quant, wavelets
from .blockxf import TransformId
from .entropy import ContainerHeader
from .errors import JtxError
from .pixmap import Image

SUBSAMPLE_444 = 0
SUBSAMPLE_420 = 1

_LIFTING = {
    TransformId.DWT53: wavelets.CDF53,
    TransformId.DWT97: wavelets.CDF97,
    TransformId.RB53: wavelets.CDF53,
    TransformId.RB97: wavelets.CDF97,
}


@dataclass(frozen=True)
class EncodeParams:
    transform: TransformId = TransformId.DCT
    quality: int = 75
    subsampling: int = SUBSAMPLE_444

    def __post_init__(self):
        if not isinstance(self.transform, TransformId):
            object.__setattr__(self, "transform", TransformId(self.transform))
        if not 1 <= self.quality <= 100:
            raise ValueError(f"quality {self.quality} out of range 1..100")
        if self.subsampling not in (SUBSAMPLE_444, SUBSAMPLE_420):
            raise ValueError(f"bad subsampling {self.subsampling}")


def _forward_coefficients(tid: TransformId, plane: np.ndarray) -> np.ndarray:
    """Padded plane -> (n, 8, 8) coefficient blocks."""
    if tid in blockxf.MATRIX_TRANSFORMS:
        return blockxf.forward_blocks(tid, pixmap.to_blocks(plane))
    if tid == TransformId.LCT:
        return lct.lct_forward(plane)
    if tid in (TransformId.DWT53, TransformId.DWT97):
        return pixmap.to_blocks(wavelets.dwt2_forward(plane, _LIFTING[tid]))
    return pixmap.to_blocks(wavelets.rb_forward(plane, _LIFTING[tid]))


def _inverse_coefficients(
    tid: TransformId, blocks: np.ndarray, height: int, width: int
) -> np.ndarray:
    """(n, 8, 8) coefficient blocks -> padded plane."""
    if tid in blockxf.MATRIX_TRANSFORMS:
        return pixmap.from_blocks(blockxf.inverse_blocks(tid, blocks), height, width)
    if tid == TransformId.LCT:
        return lct.lct_inverse(blocks, height, width)
    coefs = pixmap.from_blocks(blocks, height, width)
    if tid in (TransformId.DWT53, TransformId.DWT97):
        return wavelets.dwt2_inverse(coefs, _LIFTING[tid])
    return wavelets.rb_inverse(coefs, _LIFTING[tid])


def _channel_dims(header: ContainerHeader, channel: int) -> tuple[int, int]:
    if channel > 0 and header.subsampling == SUBSAMPLE_420:
        return math.ceil(header.width / 2), math.ceil(header.height / 2)
    return header.width, header.height


def encode(image: Image, params: EncodeParams) -> bytes:
    """Compress an RGB or grayscale image into a JTX container."""
    if image.width < 1 or image.height < 1:
        raise ValueError("image has a zero dimension")
    if image.colorspace == pixmap.YCBCR:
        raise ValueError("encode expects RGB or grayscale input")
    if image.channels == 3:
        planes = pixmap.rgb_to_ycbcr(image).planes
    else:
        planes = image.planes

    luma = quant.scale_table(quant.LUMA_TABLE, params.quality)
    chroma = quant.scale_table(quant.CHROMA_TABLE, params.quality)
    header = ContainerHeader(
        params.transform,
        params.quality,
        params.subsampling,
        image.width,
        image.height,
        len(planes),
        luma,
        chroma,
    )

    payloads = []
    for ci, raw in enumerate(planes):
        plane = np.asarray(raw, np.float64)
        if ci > 0 and params.subsampling == SUBSAMPLE_420:
            plane = pixmap.subsample_420(plane)
        padded = pixmap.pad_to_blocks(pixmap.level_shift(plane))
        coef = _forward_coefficients(params.transform, padded)
        table = luma if ci == 0 else chroma
        qblocks = quant.quantize(coef, table)
        huff = entropy.LUMA_TABLES if ci == 0 else entropy.CHROMA_TABLES
        payloads.append(entropy.encode_plane(qblocks, huff))
    return entropy.write_container(header, payloads)


def decode(data: bytes) -> Image:
    """Decompress a JTX container back to an RGB or grayscale image."""
    header, payloads = entropy.read_container(data)
    planes = []
    for ci, payload in enumerate(payloads):
        cw, ch = _channel_dims(header, ci)
        pw, ph = -cw % 8 + cw, -ch % 8 + ch
        n_blocks = (pw // 8) * (ph // 8)
        huff = entropy.LUMA_TABLES if ci == 0 else entropy.CHROMA_TABLES
        try:
            qblocks = entropy.decode_plane(payload, n_blocks, huff)
        except JtxError as exc:
            raise type(exc)(f"channel {ci}: {exc}") from exc
        table = header.luma_table if ci == 0 else header.chroma_table
        coef = quant.dequantize(qblocks, table)
        padded = _inverse_coefficients(header.transform, coef, ph, pw)
        plane = pixmap.unshift(padded[:ch, :cw])
        if ci > 0 and header.subsampling == SUBSAMPLE_420:
            plane = pixmap.upsample_420(plane)[: header.height, : header.width]
        planes.append(plane)
    if header.channels == 3:
        ycbcr = Image(header.width, header.height, pixmap.YCBCR, tuple(planes))
        return pixmap.ycbcr_to_rgb(ycbcr)
    return Image(header.width, header.height, pixmap.GRAY, tuple(planes))
