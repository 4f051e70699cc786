"""The scaled discrete linear convolution and its self-convolution schedule.

The basic operation is the sliding sum

    (a (*) b)_k = h * sum_{j=0..k} a_j * b_{k-j},    k = 0..N,

which is the trapezoidal-rule discretization of the continuous
convolution of two densities on [0, gamma] when both vanish at zero.
When a factor does not vanish at zero (or has a non-vanishing first
derivative), the endpoint-corrected variant half-weights the two
boundary terms of each sum instead.

``self_conv_power`` raises a sampled density to its n-fold convolution
power with a binary schedule: repeated squaring up to the largest power
of two below n, then combination with the recursively decomposed
remainder, for a total of at most 2*floor(log2 n) convolutions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .distributions import Distribution, pdf
from .fft import PrecisionMode, conv_fft
from .grids import GridDensity, GridMismatchError, UniformGrid, require_same_grid

__all__ = [
    "BackendKind",
    "ConvBackend",
    "GridDensity",
    "GridMismatchError",
    "UniformGrid",
    "conv_direct",
    "conv_direct_endpoint",
    "conv_fold_heterogeneous",
    "convolution_count",
    "convolve",
    "sample_pdf",
    "self_conv_power",
]


class BackendKind(enum.Enum):
    DIRECT = "direct"
    FFT = "fft"


@dataclass(frozen=True)
class ConvBackend:
    """Convolution implementation choice plus its working precision."""

    kind: BackendKind
    precision: PrecisionMode = PrecisionMode.NATIVE64

    @staticmethod
    def direct(precision: PrecisionMode = PrecisionMode.NATIVE64) -> "ConvBackend":
        return ConvBackend(BackendKind.DIRECT, precision)

    @staticmethod
    def fft(precision: PrecisionMode = PrecisionMode.NATIVE64) -> "ConvBackend":
        return ConvBackend(BackendKind.FFT, precision)


DIRECT64 = ConvBackend.direct()
FFT64 = ConvBackend.fft()


def sample_pdf(
    dist: Distribution,
    grid: UniformGrid,
    precision: PrecisionMode = PrecisionMode.NATIVE64,
) -> GridDensity:
    """Sample a density on the grid nodes, with v_0 = f(0+).

    A non-finite right limit (a density singular at zero, e.g.
    chi-squared with one degree of freedom) is replaced by 0 so the
    convolution arithmetic stays finite; accuracy guarantees do not
    cover such densities.
    """
    values = pdf(dist, grid.nodes())
    if not math.isfinite(values[0]):
        values[0] = 0.0
    if precision is PrecisionMode.EMULATED32:
        values = values.astype(np.float32)
    return GridDensity(grid, values)


def _as_dtype(v: np.ndarray, dtype) -> np.ndarray:
    return v.astype(dtype, copy=False)


def conv_direct(
    a: GridDensity,
    b: GridDensity,
    precision: PrecisionMode = PrecisionMode.NATIVE64,
) -> GridDensity:
    """Direct sliding-sum convolution.

    Each output element is accumulated left to right (j = 0..k) in the
    working precision with no compensated summation, so the rounding
    behaviour is that of a plain scalar loop.  Output elements may be
    computed by parallel workers; results are bit-identical for any
    worker count.
    """
    grid = require_same_grid(a, b)
    if precision is PrecisionMode.EMULATED32:
        out = _kernels.conv_full_f32(
            _as_dtype(a.values, np.float32),
            _as_dtype(b.values, np.float32),
            np.float32(grid.step),
        )
    else:
        out = _kernels.conv_full_f64(
            _as_dtype(a.values, np.float64),
            _as_dtype(b.values, np.float64),
            np.float64(grid.step),
        )
    return GridDensity(grid, out)


def conv_direct_endpoint(
    a: GridDensity,
    b: GridDensity,
    precision: PrecisionMode = PrecisionMode.NATIVE64,
) -> GridDensity:
    """Endpoint-corrected convolution for factors with f(0) != 0.

    out_k = h * sum_{j=1..k-1} a_j b_{k-j} + (h/2) * (a_0 b_k + a_k b_0).

    Convention for k = 0, where the interior sum is empty and the two
    half-weighted boundary terms coincide: out_0 = h * a_0 * b_0, the
    trapezoid of the constant extension on a zero-length interval.
    """
    grid = require_same_grid(a, b)
    if precision is PrecisionMode.EMULATED32:
        out = _kernels.conv_endpoint_f32(
            _as_dtype(a.values, np.float32),
            _as_dtype(b.values, np.float32),
            np.float32(grid.step),
        )
    else:
        out = _kernels.conv_endpoint_f64(
            _as_dtype(a.values, np.float64),
            _as_dtype(b.values, np.float64),
            np.float64(grid.step),
        )
    return GridDensity(grid, out)


def _conv_fft_endpoint(a: GridDensity, b: GridDensity, precision: PrecisionMode) -> GridDensity:
    # full FFT convolution minus the half of each boundary term that the
    # endpoint-corrected sum removes
    grid = require_same_grid(a, b)
    full = conv_fft(a, b, precision)
    dt = precision.dtype
    h = dt.type(grid.step)
    half = dt.type(0.5)
    av = _as_dtype(a.values, dt)
    bv = _as_dtype(b.values, dt)
    out = full.values - half * h * (av[0] * bv + av * bv[0])
    out[0] = h * (av[0] * bv[0])
    return GridDensity(grid, out)


def convolve(
    a: GridDensity,
    b: GridDensity,
    backend: ConvBackend = DIRECT64,
    endpoint: bool = False,
) -> GridDensity:
    """Single convolution through the chosen backend and variant."""
    if backend.kind is BackendKind.DIRECT:
        op = conv_direct_endpoint if endpoint else conv_direct
        return op(a, b, backend.precision)
    if endpoint:
        return _conv_fft_endpoint(a, b, backend.precision)
    return conv_fft(a, b, backend.precision)


def convolution_count(n: int) -> int:
    """Number of convolutions the binary schedule performs for power n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return 0
    m = n.bit_length() - 1
    return m + bin(n).count("1") - 1


def self_conv_power(
    density: GridDensity,
    n: int,
    backend: ConvBackend = DIRECT64,
    endpoint: bool = False,
) -> GridDensity:
    """n-fold convolution power via repeated squaring.

    Powers of two up to 2^floor(log2 n) are built by squaring; when n
    is not a power of two the remainder is combined from the cached
    squarings, highest power first.  n = 1 returns the input unchanged.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return density
    m = n.bit_length() - 1
    powers = [density]
    for _ in range(m):
        powers.append(convolve(powers[-1], powers[-1], backend, endpoint))
    result = powers[m]
    remainder = n - (1 << m)
    while remainder:
        level = remainder.bit_length() - 1
        result = convolve(result, powers[level], backend, endpoint)
        remainder -= 1 << level
    return result


def conv_fold_heterogeneous(
    densities: list[GridDensity],
    backend: ConvBackend = DIRECT64,
    endpoint: bool = False,
) -> GridDensity:
    """Left fold of the convolution over a non-empty list of densities,
    in the given order."""
    if not densities:
        raise ValueError("conv_fold_heterogeneous requires a non-empty list")
    result = densities[0]
    for other in densities[1:]:
        result = convolve(result, other, backend, endpoint)
    return result
