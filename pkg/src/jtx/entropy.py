"""Zig-zag scan, DC/AC symbolization, Huffman coding, and the JTX container.

Coefficient planes are coded JPEG-baseline style: the DC coefficient of each
block is DPCM-coded against the previous block's DC (first block predicts
from zero), AC coefficients are run-length coded along the zig-zag scan with
(run, size) symbols, EOB = 0x00 and ZRL = 0xF0, and amplitudes follow the
magnitude convention of storing a negative value v as v - 1 in `size` bits.
Streams are packed MSB-first; the final byte is padded with 1-bits.

Container layout (little-endian), all integers unsigned:

    magic "JTX1" | version u8 | transform u8 | quality u8 | subsampling u8
    | width u32 | height u32 | channels u8 | quant tables 128 bytes
    | payload byte length u32 per channel | crc32 u32 | payloads

The CRC covers every container byte except the CRC field itself, so any
corruption that the prefix-code structure cannot detect is still rejected.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .blockxf import TransformId
from .errors import CoefficientOverflowError, ContainerError, StreamError

MAGIC = b"JTX1"
VERSION = 1

_EOB = 0x00
_ZRL = 0xF0
_MAX_AC_SIZE = 10
_MAX_DC_SIZE = 11


def _zigzag_order() -> np.ndarray:
    """Flat (row*8+col) indices of the standard zig-zag scan."""
    order = []
    for s in range(15):
        diag = [(k, s - k) for k in range(max(0, s - 7), min(s, 7) + 1)]
        if s % 2 == 0:
            diag.reverse()
        order.extend(diag)
    return np.array([r * 8 + c for r, c in order])


ZIGZAG = _zigzag_order()
ZIGZAG.setflags(write=False)


def zigzag(block: np.ndarray) -> np.ndarray:
    """Scan an 8x8 block into a 64-vector, DC first."""
    return np.asarray(block).reshape(64)[ZIGZAG]


def unzigzag(vec: np.ndarray) -> np.ndarray:
    out = np.empty(64, dtype=np.asarray(vec).dtype)
    out[ZIGZAG] = vec
    return out.reshape(8, 8)


@dataclass(frozen=True)
class HuffmanTable:
    """Canonical Huffman code: codes-per-length counts plus symbol order."""

    counts: tuple[int, ...]  # number of codes of length 1..16
    symbols: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != 16:
            raise ValueError("counts must cover code lengths 1..16")
        if sum(self.counts) != len(self.symbols):
            raise ValueError("symbol count does not match length counts")
        if self.kraft_sum() > 1.0 + 1e-12:
            raise ValueError("code violates the Kraft inequality")

    def kraft_sum(self) -> float:
        return sum(c * 2.0 ** -(i + 1) for i, c in enumerate(self.counts))

    @cached_property
    def _assignment(self) -> list[tuple[int, int, int]]:
        """(symbol, code, length) triples in canonical order."""
        out = []
        code = 0
        it = iter(self.symbols)
        for length, count in enumerate(self.counts, start=1):
            for _ in range(count):
                out.append((next(it), code, length))
                code += 1
            code <<= 1
        return out

    @cached_property
    def encode_maps(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays indexed by symbol byte: (code, code length); length 0 = no code."""
        codes = np.zeros(256, np.int64)
        lengths = np.zeros(256, np.int64)
        for sym, code, length in self._assignment:
            codes[sym] = code
            lengths[sym] = length
        return codes, lengths

    @cached_property
    def decode_luts(self) -> tuple[list[int], list[int]]:
        """65536-entry (symbol, length) lookup keyed on the next 16 stream bits."""
        syms = np.zeros(1 << 16, np.int16)
        lens = np.zeros(1 << 16, np.uint8)
        for sym, code, length in self._assignment:
            lo = code << (16 - length)
            hi = (code + 1) << (16 - length)
            syms[lo:hi] = sym
            lens[lo:hi] = length
        return syms.tolist(), lens.tolist()


# The standard example tables (luminance and chrominance, DC and AC).
STD_DC_LUMA = HuffmanTable(
    counts=(0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0),
    symbols=tuple(range(12)),
)
STD_DC_CHROMA = HuffmanTable(
    counts=(0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0),
    symbols=tuple(range(12)),
)
STD_AC_LUMA = HuffmanTable(
    counts=(0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125),
    symbols=(
        0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12,
        0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
        0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08,
        0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0,
        0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0A, 0x16,
        0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28,
        0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39,
        0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
        0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
        0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
        0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79,
        0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
        0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98,
        0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7,
        0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6,
        0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5,
        0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4,
        0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
        0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA,
        0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
        0xF9, 0xFA,
    ),
)
STD_AC_CHROMA = HuffmanTable(
    counts=(0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 119),
    symbols=(
        0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21,
        0x31, 0x06, 0x12, 0x41, 0x51, 0x07, 0x61, 0x71,
        0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91,
        0xA1, 0xB1, 0xC1, 0x09, 0x23, 0x33, 0x52, 0xF0,
        0x15, 0x62, 0x72, 0xD1, 0x0A, 0x16, 0x24, 0x34,
        0xE1, 0x25, 0xF1, 0x17, 0x18, 0x19, 0x1A, 0x26,
        0x27, 0x28, 0x29, 0x2A, 0x35, 0x36, 0x37, 0x38,
        0x39, 0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48,
        0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58,
        0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68,
        0x69, 0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78,
        0x79, 0x7A, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
        0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96,
        0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5,
        0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4,
        0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3,
        0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2,
        0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA,
        0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9,
        0xEA, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
        0xF9, 0xFA,
    ),
)

LUMA_TABLES = (STD_DC_LUMA, STD_AC_LUMA)
CHROMA_TABLES = (STD_DC_CHROMA, STD_AC_CHROMA)


def _category(absvals: np.ndarray) -> np.ndarray:
    """Magnitude bit length (JPEG category); exact for |v| < 2**53."""
    return np.frexp(absvals.astype(np.float64))[1].astype(np.int64)


def _pack_bits(values: np.ndarray, lengths: np.ndarray) -> bytes:
    """MSB-first pack of variable-length code words, 1-padded to a byte."""
    total = int(lengths.sum())
    maxlen = int(lengths.max(initial=1))
    shifts = lengths[:, None] - 1 - np.arange(maxlen)
    bits = ((values[:, None] >> np.maximum(shifts, 0)) & 1).astype(np.uint8)
    flat = bits[shifts >= 0]
    pad = np.ones(-total % 8, np.uint8)
    return np.packbits(np.concatenate([flat, pad])).tobytes()


def encode_plane(blocks: np.ndarray, tables: tuple[HuffmanTable, HuffmanTable]) -> bytes:
    """Entropy-code quantized (n, 8, 8) blocks, row-major, DPCM reset at start."""
    dc_table, ac_table = tables
    dc_codes, dc_lens = dc_table.encode_maps
    ac_codes, ac_lens = ac_table.encode_maps

    zz = np.asarray(blocks, np.int64).reshape(-1, 64)[:, ZIGZAG]
    nblocks = zz.shape[0]

    diff = np.diff(zz[:, 0], prepend=np.int64(0))
    dsize = _category(np.abs(diff))
    if dsize.max(initial=0) > _MAX_DC_SIZE:
        raise CoefficientOverflowError(f"DC category {dsize.max()} exceeds {_MAX_DC_SIZE}")
    damp = np.where(diff < 0, diff + (np.int64(1) << dsize) - 1, diff)
    dvals = (dc_codes[dsize] << dsize) | damp
    dlens = dc_lens[dsize] + dsize

    ac = zz[:, 1:]
    bidx, pos = np.nonzero(ac)
    vals = ac[bidx, pos]
    asize = _category(np.abs(vals))
    if asize.max(initial=0) > _MAX_AC_SIZE:
        raise CoefficientOverflowError(f"AC category {asize.max()} exceeds {_MAX_AC_SIZE}")
    prev = np.concatenate([[np.int64(0)], pos[:-1]])
    new_block = np.ones(len(pos), bool)
    new_block[1:] = bidx[1:] != bidx[:-1]
    run = np.where(new_block, pos, pos - prev - 1)
    sym = ((run & 15) << 4) | asize
    amp = np.where(vals < 0, vals + (np.int64(1) << asize) - 1, vals)
    avals = (ac_codes[sym] << asize) | amp
    alens = ac_lens[sym] + asize

    # expand runs >= 16 into leading ZRL symbols
    counts = (run >> 4) + 1
    zrl_val = np.int64(ac_codes[_ZRL])
    zrl_len = np.int64(ac_lens[_ZRL])
    evals = np.full(int(counts.sum()), zrl_val)
    elens = np.full(evals.shape, zrl_len)
    ends = np.cumsum(counts) - 1
    evals[ends] = avals
    elens[ends] = alens
    eblocks = np.repeat(bidx, counts)

    # EOB for every block whose trailing AC coefficients are zero
    last_nz = np.full(nblocks, -1, np.int64)
    last_nz[bidx] = pos
    eob_blocks = np.flatnonzero(last_nz < 62)
    eob_val = np.full(len(eob_blocks), np.int64(ac_codes[_EOB]))
    eob_len = np.full(len(eob_blocks), np.int64(ac_lens[_EOB]))

    order = np.argsort(
        np.concatenate([np.arange(nblocks), eblocks, eob_blocks]), kind="stable"
    )
    allvals = np.concatenate([dvals, evals, eob_val])[order]
    alllens = np.concatenate([dlens, elens, eob_len])[order]
    return _pack_bits(allvals, alllens)


_POW16 = (1 << np.arange(15, -1, -1)).astype(np.int64)


def decode_plane(
    data: bytes, n_blocks: int, tables: tuple[HuffmanTable, HuffmanTable]
) -> np.ndarray:
    """Exact inverse of encode_plane; raises StreamError on any corruption."""
    dc_table, ac_table = tables
    dsyms, dlens = dc_table.decode_luts
    asyms, alens = ac_table.decode_luts

    bits = np.unpackbits(np.frombuffer(data, np.uint8))
    total = bits.size
    padded = np.concatenate([bits, np.zeros(16, np.uint8)])
    # value of the 16 bits starting at every offset, as a plain list for speed
    next16 = (sliding_window_view(padded, 16)[: total + 1].astype(np.int64) @ _POW16).tolist()

    pos = 0
    dc_diffs = []
    flat_idx = []
    flat_val = []
    for b in range(n_blocks):
        v = next16[pos]
        length = dlens[v]
        if length == 0:
            raise StreamError("invalid DC code", pos)
        if pos + length > total:
            raise StreamError("stream exhausted inside DC code", pos)
        size = dsyms[v]
        pos += length
        if size:
            if pos + size > total:
                raise StreamError("stream exhausted inside DC amplitude", pos)
            a = next16[pos] >> (16 - size)
            pos += size
            dc_diffs.append(a - (1 << size) + 1 if a < (1 << (size - 1)) else a)
        else:
            dc_diffs.append(0)
        k = 1
        base = b << 6
        while k < 64:
            v = next16[pos]
            length = alens[v]
            if length == 0:
                raise StreamError("invalid AC code", pos)
            if pos + length > total:
                raise StreamError("stream exhausted inside AC code", pos)
            sym = asyms[v]
            pos += length
            if sym == _EOB:
                break
            if sym == _ZRL:
                k += 16
                if k > 63:
                    raise StreamError("zero run past end of block", pos)
                continue
            size = sym & 15
            if size == 0:
                raise StreamError("invalid AC symbol", pos)
            k += sym >> 4
            if k > 63:
                raise StreamError("coefficient index past end of block", pos)
            if pos + size > total:
                raise StreamError("stream exhausted inside AC amplitude", pos)
            a = next16[pos] >> (16 - size)
            pos += size
            flat_idx.append(base | k)
            flat_val.append(a - (1 << size) + 1 if a < (1 << (size - 1)) else a)
            k += 1

    rem = total - pos
    if rem >= 8:
        raise StreamError("trailing data after final block", pos)
    if rem and next16[pos] >> (16 - rem) != (1 << rem) - 1:
        raise StreamError("nonzero padding bits", pos)

    zz = np.zeros(n_blocks * 64, np.int64)
    if flat_idx:
        zz[flat_idx] = flat_val
    zz[0::64] = np.cumsum(dc_diffs)
    out = np.empty((n_blocks, 64), np.int32)
    out[:, ZIGZAG] = zz.reshape(n_blocks, 64)
    return out.reshape(n_blocks, 8, 8)


@dataclass(eq=False)
class ContainerHeader:
    transform: TransformId
    quality: int
    subsampling: int  # 0 = 4:4:4, 1 = 4:2:0
    width: int
    height: int
    channels: int
    luma_table: np.ndarray
    chroma_table: np.ndarray


_FIXED_FMT = "<4sBBBBIIB"
_FIXED_LEN = struct.calcsize(_FIXED_FMT)


def write_container(header: ContainerHeader, payloads: list[bytes]) -> bytes:
    if len(payloads) != header.channels:
        raise ValueError("one payload per channel required")
    head = struct.pack(
        _FIXED_FMT,
        MAGIC,
        VERSION,
        int(header.transform),
        header.quality,
        header.subsampling,
        header.width,
        header.height,
        header.channels,
    )
    head += header.luma_table.astype(np.uint8).tobytes()
    head += header.chroma_table.astype(np.uint8).tobytes()
    head += struct.pack(f"<{header.channels}I", *(len(p) for p in payloads))
    body = b"".join(payloads)
    crc = zlib.crc32(head + body)
    return head + struct.pack("<I", crc) + body


def read_container(data: bytes) -> tuple[ContainerHeader, list[bytes]]:
    if len(data) < _FIXED_LEN + 128:
        raise ContainerError("container truncated")
    magic, version, tid, quality, sub, width, height, channels = struct.unpack_from(
        _FIXED_FMT, data
    )
    if magic != MAGIC:
        raise ContainerError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ContainerError(f"unsupported version {version}")
    try:
        transform = TransformId(tid)
    except ValueError:
        raise ContainerError(f"unknown transform id {tid}") from None
    if not 1 <= quality <= 100:
        raise ContainerError(f"quality {quality} out of range")
    if sub not in (0, 1):
        raise ContainerError(f"bad subsampling flag {sub}")
    if channels not in (1, 3):
        raise ContainerError(f"bad channel count {channels}")
    if width < 1 or height < 1:
        raise ContainerError(f"bad dimensions {width}x{height}")
    off = _FIXED_LEN
    tables = np.frombuffer(data[off : off + 128], np.uint8)
    off += 128
    luma = tables[:64].reshape(8, 8).astype(np.int32)
    chroma = tables[64:].reshape(8, 8).astype(np.int32)
    if luma.min() < 1 or chroma.min() < 1:
        raise ContainerError("quantization divisor below 1")
    if len(data) < off + 4 * channels + 4:
        raise ContainerError("container truncated")
    lengths = struct.unpack_from(f"<{channels}I", data, off)
    off += 4 * channels
    (crc,) = struct.unpack_from("<I", data, off)
    off += 4
    if len(data) - off != sum(lengths):
        raise ContainerError(
            f"payload length mismatch: declared {sum(lengths)}, found {len(data) - off}"
        )
    if zlib.crc32(data[: off - 4] + data[off:]) != crc:
        raise ContainerError("integrity check failed (CRC mismatch)")
    payloads = []
    for n in lengths:
        payloads.append(data[off : off + n])
        off += n
    header = ContainerHeader(transform, quality, sub, width, height, channels, luma, chroma)
    return header, payloads
