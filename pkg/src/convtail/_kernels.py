"""Compiled numerical kernels.

All kernels fix the floating-point operation order explicitly:

* the sliding-sum convolutions accumulate each output element left to
  right (j = 0..k) with no compensated summation, so rounding behaves
  exactly like a plain scalar loop in the working precision;
* the 32-bit variants perform every add and multiply in IEEE single
  precision, which rounds each intermediate result to the nearest
  32-bit value;
* the transforms are iterative radix-2 with bit reversal and run
  serially, so their operation order never depends on thread count.

The convolution kernels parallelise over output indices only.  Output
element k is paired with element n-1-k so both threads receive equal
work; each element is still accumulated by a single thread in its fixed
order, which keeps results bit-identical for any worker count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from ._threading import configure_threads

configure_threads()


@njit(parallel=True, cache=True)
def conv_full_f64(a, b, h):
    n = a.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in prange((n + 1) // 2):
        s = 0.0
        for j in range(i + 1):
            s += a[j] * b[i - j]
        out[i] = h * s
        k = n - 1 - i
        if k != i:
            s = 0.0
            for j in range(k + 1):
                s += a[j] * b[k - j]
            out[k] = h * s
    return out


@njit(parallel=True, cache=True)
def conv_full_f32(a, b, h):
    n = a.shape[0]
    out = np.empty(n, dtype=np.float32)
    for i in prange((n + 1) // 2):
        s = np.float32(0.0)
        for j in range(i + 1):
            s += a[j] * b[i - j]
        out[i] = h * s
        k = n - 1 - i
        if k != i:
            s = np.float32(0.0)
            for j in range(k + 1):
                s += a[j] * b[k - j]
            out[k] = h * s
    return out


@njit(parallel=True, cache=True)
def conv_endpoint_f64(a, b, h):
    # interior sum j = 1..k-1 plus half-weighted boundary terms; k = 0
    # degenerates to h*a0*b0 (both half terms coincide)
    n = a.shape[0]
    out = np.empty(n, dtype=np.float64)
    half = np.float64(0.5)
    for i in prange((n + 1) // 2):
        s = 0.0
        for j in range(1, i):
            s += a[j] * b[i - j]
        if i == 0:
            out[0] = h * (a[0] * b[0])
        else:
            out[i] = h * s + half * h * (a[0] * b[i] + a[i] * b[0])
        k = n - 1 - i
        if k != i:
            s = 0.0
            for j in range(1, k):
                s += a[j] * b[k - j]
            out[k] = h * s + half * h * (a[0] * b[k] + a[k] * b[0])
    return out


@njit(parallel=True, cache=True)
def conv_endpoint_f32(a, b, h):
    n = a.shape[0]
    out = np.empty(n, dtype=np.float32)
    half = np.float32(0.5)
    for i in prange((n + 1) // 2):
        s = np.float32(0.0)
        for j in range(1, i):
            s += a[j] * b[i - j]
        if i == 0:
            out[0] = h * (a[0] * b[0])
        else:
            out[i] = h * s + half * h * (a[0] * b[i] + a[i] * b[0])
        k = n - 1 - i
        if k != i:
            s = np.float32(0.0)
            for j in range(1, k):
                s += a[j] * b[k - j]
            out[k] = h * s + half * h * (a[0] * b[k] + a[k] * b[0])
    return out


@njit(cache=True)
def dot_f64(w, v):
    s = 0.0
    for j in range(w.shape[0]):
        s += w[j] * v[j]
    return s


@njit(cache=True)
def dot_f32(w, v):
    s = np.float32(0.0)
    for j in range(w.shape[0]):
        s += w[j] * v[j]
    return np.float32(s)


@njit(cache=True)
def fft_radix2_f64(re, im, rev, cos_tab, sin_tab, sign):
    """In-place radix-2 transform; twiddles e^{sign*i*2*pi*j/n}."""
    n = re.shape[0]
    for i in range(n):
        r = rev[i]
        if r > i:
            tmp = re[i]
            re[i] = re[r]
            re[r] = tmp
            tmp = im[i]
            im[i] = im[r]
            im[r] = tmp
    size = 2
    while size <= n:
        half = size >> 1
        step = n // size
        for start in range(0, n, size):
            for j in range(half):
                wr = cos_tab[j * step]
                wi = sign * sin_tab[j * step]
                p = start + j
                q = p + half
                tr = wr * re[q] - wi * im[q]
                ti = wr * im[q] + wi * re[q]
                re[q] = re[p] - tr
                im[q] = im[p] - ti
                re[p] = re[p] + tr
                im[p] = im[p] + ti
        size <<= 1


@njit(cache=True)
def fft_radix2_f32(re, im, rev, cos_tab, sin_tab, sign):
    n = re.shape[0]
    for i in range(n):
        r = rev[i]
        if r > i:
            tmp = re[i]
            re[i] = re[r]
            re[r] = tmp
            tmp = im[i]
            im[i] = im[r]
            im[r] = tmp
    size = 2
    while size <= n:
        half = size >> 1
        step = n // size
        for start in range(0, n, size):
            for j in range(half):
                wr = cos_tab[j * step]
                wi = sign * sin_tab[j * step]
                p = start + j
                q = p + half
                tr = wr * re[q] - wi * im[q]
                ti = wr * im[q] + wi * re[q]
                re[q] = re[p] - tr
                im[q] = im[p] - ti
                re[p] = re[p] + tr
                im[p] = im[p] + ti
        size <<= 1
