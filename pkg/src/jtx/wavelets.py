"""Lifting wavelets: separable CDF 5/3 and 9/7, and red-black quincunx variants.

All four paths run three decomposition levels in place on strided sub-grids,
so the coarsest approximation lands on the 8-periodic lattice and every 8x8
tile of the output holds one coefficient per subband. A 3-bit bit-reversal
of row and column indices inside each tile then orders coefficients coarse
to fine, with the level-3 approximation at (0, 0) like a DC coefficient.

Forward 1-D lifting splits a segment into even (approximation) and odd
(detail) samples in place, applies the predict/update steps with whole-sample
symmetric extension at segment ends, scales approximations by zeta and
details by 1/zeta. Inversion reverses the steps exactly, which makes perfect
reconstruction independent of the step coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PREDICT = "predict"
UPDATE = "update"


@dataclass(frozen=True)
class LiftingSpec:
    name: str
    steps: tuple[tuple[str, float], ...]
    zeta: float


CDF53 = LiftingSpec("cdf53", ((PREDICT, -0.5), (UPDATE, 0.25)), 1.0)
CDF97 = LiftingSpec(
    "cdf97",
    (
        (PREDICT, -1.5861343420693648),
        (UPDATE, -0.0529801185718856),
        (PREDICT, 0.8829110755411875),
        (UPDATE, 0.4435068520511142),
    ),
    1.1496043988602418,
)

BITREV3 = np.array([0, 4, 2, 6, 1, 5, 3, 7])
BITREV3.setflags(write=False)


def _axis_slices(axis: int):
    if axis == 0:
        return lambda s: (s, slice(None))
    return lambda s: (slice(None), s)


def _lift_axis(a: np.ndarray, spec: LiftingSpec, axis: int, inverse: bool) -> None:
    """One forward/inverse lifting pass along `axis` of a 2-D view, in place."""
    if a.shape[axis] < 2 or a.shape[axis] % 2:
        raise ValueError(f"segment length {a.shape[axis]} must be even and >= 2")
    sl = _axis_slices(axis)
    ev = a[sl(slice(0, None, 2))]
    od = a[sl(slice(1, None, 2))]
    if inverse:
        ev /= spec.zeta
        od *= spec.zeta
    steps = reversed(spec.steps) if inverse else spec.steps
    sign = -1.0 if inverse else 1.0
    for kind, coef in steps:
        if kind == PREDICT:
            # odd sample k sits between even k and even k+1; mirror at the end
            right = np.concatenate([ev[sl(slice(1, None))], ev[sl(slice(-1, None))]], axis=axis)
            od += sign * coef * (ev + right)
        else:
            # even sample k sits between odd k-1 and odd k; mirror at the start
            left = np.concatenate([od[sl(slice(0, 1))], od[sl(slice(0, -1))]], axis=axis)
            ev += sign * coef * (od + left)
    if not inverse:
        ev *= spec.zeta
        od /= spec.zeta


def lift_1d(signal: np.ndarray, spec: LiftingSpec, inverse: bool = False) -> None:
    """In-place lifting of a 1-D (possibly strided) float view."""
    _lift_axis(signal[:, None], spec, 0, inverse)


def _pack_perm(n: int) -> np.ndarray:
    i = np.arange(n)
    return (i & ~7) | BITREV3[i & 7]


def pack_blocks(plane: np.ndarray) -> np.ndarray:
    """Permute each 8x8 tile by 3-bit bit-reversal of row/column indices."""
    pr = _pack_perm(plane.shape[0])
    pc = _pack_perm(plane.shape[1])
    return plane[np.ix_(pr, pc)]


unpack_blocks = pack_blocks  # bit-reversal is an involution


def _check_dims(plane: np.ndarray) -> np.ndarray:
    a = np.asarray(plane, np.float64)
    if a.ndim != 2 or a.shape[0] % 8 or a.shape[1] % 8:
        raise ValueError(f"plane dims {a.shape} must be 2-D multiples of 8")
    return a


def dwt2_forward(plane: np.ndarray, spec: LiftingSpec) -> np.ndarray:
    """Three-level separable lifting, then bit-reversal packing."""
    out = _check_dims(plane).copy()
    for level in range(3):
        view = out[:: 1 << level, :: 1 << level]
        _lift_axis(view, spec, 1, inverse=False)
        _lift_axis(view, spec, 0, inverse=False)
    return pack_blocks(out)


def dwt2_inverse(coefs: np.ndarray, spec: LiftingSpec) -> np.ndarray:
    out = unpack_blocks(_check_dims(coefs)).copy()
    for level in (2, 1, 0):
        view = out[:: 1 << level, :: 1 << level]
        _lift_axis(view, spec, 0, inverse=True)
        _lift_axis(view, spec, 1, inverse=True)
    return out


def _axial_sum(g: np.ndarray) -> np.ndarray:
    p = np.pad(g, 1, mode="reflect")
    return p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]


def _diag_sum(g: np.ndarray) -> np.ndarray:
    p = np.pad(g, 1, mode="reflect")
    return p[:-2, :-2] + p[:-2, 2:] + p[2:, :-2] + p[2:, 2:]


def _quincunx_masks(shape: tuple[int, int]):
    ii, jj = np.indices(shape)
    black = (ii + jj) % 2 == 1
    odd_odd = (ii % 2 == 1) & (jj % 2 == 1)
    even_even = (ii % 2 == 0) & (jj % 2 == 0)
    return black, ~black, odd_odd, even_even


def _rb_level(g: np.ndarray, spec: LiftingSpec, inverse: bool) -> None:
    """One quincunx level in place: axial pass splits red/black, diagonal pass
    splits the red lattice again; each 1-D coefficient is spread as coef/2
    over the 4 neighbors. Boundaries use whole-sample symmetric extension."""
    black, red, odd_odd, even_even = _quincunx_masks(g.shape)
    half = [(kind, coef / 2.0) for kind, coef in spec.steps]

    def run(detail_mask, approx_mask, neighbor_sum, sign):
        steps = reversed(half) if inverse else half
        for kind, coef in steps:
            s = neighbor_sum(g)
            if kind == PREDICT:
                g[detail_mask] += sign * coef * s[detail_mask]
            else:
                g[approx_mask] += sign * coef * s[approx_mask]

    if inverse:
        g[even_even] /= spec.zeta
        g[odd_odd] *= spec.zeta
        run(odd_odd, even_even, _diag_sum, -1.0)
        g[red] /= spec.zeta
        g[black] *= spec.zeta
        run(black, red, _axial_sum, -1.0)
    else:
        run(black, red, _axial_sum, 1.0)
        g[red] *= spec.zeta
        g[black] /= spec.zeta
        run(odd_odd, even_even, _diag_sum, 1.0)
        g[even_even] *= spec.zeta
        g[odd_odd] /= spec.zeta


def rb_forward(plane: np.ndarray, spec: LiftingSpec) -> np.ndarray:
    """Three-level red-black quincunx lifting, then bit-reversal packing."""
    out = _check_dims(plane).copy()
    for level in range(3):
        stride = 1 << level
        sub = out[::stride, ::stride].copy()
        _rb_level(sub, spec, inverse=False)
        out[::stride, ::stride] = sub
    return pack_blocks(out)


def rb_inverse(coefs: np.ndarray, spec: LiftingSpec) -> np.ndarray:
    out = unpack_blocks(_check_dims(coefs)).copy()
    for level in (2, 1, 0):
        stride = 1 << level
        sub = out[::stride, ::stride].copy()
        _rb_level(sub, spec, inverse=True)
        out[::stride, ::stride] = sub
    return out
