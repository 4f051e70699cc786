"""Radix-2 FFT/IFFT and the zero-padded FFT convolution path.

The forward transform uses the convention

    X[k] = sum_j x[j] * e^{+i*2*pi*k*j/n},   no scaling,

and the inverse uses e^{-i*2*pi*k*j/n} with a 1/n factor, so
``ifft(fft(x)) == x`` up to rounding.  Transforms are iterative with
bit reversal and run serially, giving a reproducible operation order in
both precision modes.

A :class:`PrecisionMode` selects between native 64-bit arithmetic and
an emulated 32-bit pipeline in which every arithmetic operation rounds
to the nearest single-precision value and the twiddle factors are
computed in 64-bit, then rounded to 32-bit once.
"""

from __future__ import annotations

import enum

import numpy as np

from . import _kernels
from .grids import GridDensity, require_same_grid


class PrecisionMode(enum.Enum):
    """Floating-point working precision for convolution backends."""

    NATIVE64 = "64"
    EMULATED32 = "32emu"

    @property
    def machine_epsilon(self) -> float:
        return 2.0**-53 if self is PrecisionMode.NATIVE64 else 2.0**-24

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.float64) if self is PrecisionMode.NATIVE64 else np.dtype(np.float32)

    @property
    def complex_dtype(self) -> np.dtype:
        return np.dtype(np.complex128) if self is PrecisionMode.NATIVE64 else np.dtype(np.complex64)


# plan cache: transform length -> (bit-reversal permutation, cos64, sin64)
_PLANS: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
_PLANS32: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def padded_length(n_intervals: int) -> int:
    """Smallest power of two >= 2*N + 1, the linear-convolution length."""
    length = 1
    while length < 2 * n_intervals + 1:
        length <<= 1
    return length


def _plan(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    plan = _PLANS.get(n)
    if plan is None:
        bits = n.bit_length() - 1
        rev = np.zeros(n, dtype=np.int64)
        for i in range(1, n):
            rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
        angles = 2.0 * np.pi * np.arange(max(n // 2, 1), dtype=np.float64) / n
        plan = (rev, np.cos(angles), np.sin(angles))
        _PLANS[n] = plan
    return plan


def _plan32(n: int) -> tuple[np.ndarray, np.ndarray]:
    plan = _PLANS32.get(n)
    if plan is None:
        _, cos64, sin64 = _plan(n)
        plan = (cos64.astype(np.float32), sin64.astype(np.float32))
        _PLANS32[n] = plan
    return plan


def _transform(re: np.ndarray, im: np.ndarray, inverse: bool, precision: PrecisionMode) -> None:
    n = re.shape[0]
    rev, cos64, sin64 = _plan(n)
    sign = -1.0 if inverse else 1.0
    if precision is PrecisionMode.NATIVE64:
        _kernels.fft_radix2_f64(re, im, rev, cos64, sin64, sign)
        if inverse:
            scale = np.float64(1.0 / n)
            re *= scale
            im *= scale
    else:
        cos32, sin32 = _plan32(n)
        _kernels.fft_radix2_f32(re, im, rev, cos32, sin32, np.float32(sign))
        if inverse:
            scale = np.float32(1.0 / n)
            re *= scale
            im *= scale


def _check_vector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1 or not _is_pow2(v.shape[0]):
        raise ValueError(f"transform length must be a power of two, got shape {v.shape}")
    return v


def fft(v: np.ndarray, precision: PrecisionMode = PrecisionMode.NATIVE64) -> np.ndarray:
    """Forward DFT of a power-of-two-length complex vector, unscaled."""
    v = _check_vector(v)
    dt = precision.dtype
    # astype copies: the kernel works in place and must not alias the input
    re = v.real.astype(dt)
    im = v.imag.astype(dt)
    _transform(re, im, inverse=False, precision=precision)
    out = np.empty(v.shape[0], dtype=precision.complex_dtype)
    out.real = re
    out.imag = im
    return out


def ifft(v: np.ndarray, precision: PrecisionMode = PrecisionMode.NATIVE64) -> np.ndarray:
    """Inverse DFT including the 1/n factor."""
    v = _check_vector(v)
    dt = precision.dtype
    re = v.real.astype(dt)
    im = v.imag.astype(dt)
    _transform(re, im, inverse=True, precision=precision)
    out = np.empty(v.shape[0], dtype=precision.complex_dtype)
    out.real = re
    out.imag = im
    return out


def conv_fft(
    a: GridDensity,
    b: GridDensity,
    precision: PrecisionMode = PrecisionMode.NATIVE64,
) -> GridDensity:
    """Scaled discrete linear convolution computed via zero-padded FFTs.

    Both length-(N+1) inputs are zero-padded to the smallest power of
    two >= 2N+1; the result is the real part of the inverse transform
    of the spectral product, truncated to indices 0..N and scaled by
    the grid step.  When ``a`` and ``b`` hold the same values a single
    forward transform is run and its spectrum squared.

    Negative output components are not clamped.
    """
    grid = require_same_grid(a, b)
    n = grid.n_intervals
    dt = precision.dtype
    length = padded_length(n)

    are = np.zeros(length, dtype=dt)
    are[: n + 1] = a.values.astype(dt, copy=False)
    aim = np.zeros(length, dtype=dt)
    _transform(are, aim, inverse=False, precision=precision)

    same = a is b or np.array_equal(a.values, b.values)
    if same:
        bre, bim = are, aim
    else:
        bre = np.zeros(length, dtype=dt)
        bre[: n + 1] = b.values.astype(dt, copy=False)
        bim = np.zeros(length, dtype=dt)
        _transform(bre, bim, inverse=False, precision=precision)

    prod_re = are * bre - aim * bim
    prod_im = are * bim + aim * bre
    _transform(prod_re, prod_im, inverse=True, precision=precision)

    h = dt.type(grid.step)
    out = prod_re[: n + 1] * h
    return GridDensity(grid, out)
