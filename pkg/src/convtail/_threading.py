"""Worker-count control for the compiled kernels.

The environment variable ``CONVTAIL_THREADS`` caps the number of worker
threads used by the parallel convolution kernels (0 or unset means
automatic, i.e. all cores).  Results are bit-identical for any worker
count because every output element is accumulated by exactly one thread
in a fixed order.
"""

from __future__ import annotations

import os

import numba

ENV_VAR = "CONVTAIL_THREADS"

_configured = False


def configure_threads() -> int:
    """Apply the CONVTAIL_THREADS cap once and return the active count."""
    global _configured
    if not _configured:
        raw = os.environ.get(ENV_VAR, "0")
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
        if requested > 0:
            numba.set_num_threads(min(requested, numba.config.NUMBA_NUM_THREADS))
        _configured = True
    return numba.get_num_threads()
