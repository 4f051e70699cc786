"""Composite closed Newton-Cotes rules: Trapezoid, Simpson, Boole.

All three rules have non-negative weights whose sum equals the length
of the integration interval.  The estimate is the weighted sum of the
sampled density, accumulated left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .fft import PrecisionMode
from .grids import GridDensity, UniformGrid


class DivisibilityError(ValueError):
    """N does not satisfy a rule's divisibility constraint."""


@dataclass(frozen=True)
class NewtonCotesRule:
    """A composite rule of convergence order ``order`` requiring N to be
    a multiple of ``divisibility``."""

    name: str
    order: int
    divisibility: int

    def check_admissible(self, n_intervals: int) -> None:
        if n_intervals % self.divisibility != 0:
            raise DivisibilityError(
                f"{self.name} rule requires N to be a multiple of "
                f"{self.divisibility}, got N={n_intervals}"
            )

    def round_up(self, n_intervals: int) -> int:
        """Smallest admissible N >= the requested one."""
        d = self.divisibility
        return ((n_intervals + d - 1) // d) * d


TRAPEZOID = NewtonCotesRule("trapezoid", order=2, divisibility=1)
SIMPSON = NewtonCotesRule("simpson", order=4, divisibility=2)
BOOLE = NewtonCotesRule("boole", order=6, divisibility=4)

RULES = {r.name: r for r in (TRAPEZOID, SIMPSON, BOOLE)}


def rule_by_name(name: str) -> NewtonCotesRule:
    try:
        return RULES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown quadrature rule {name!r}; choose from {sorted(RULES)}") from None


def weights(rule: NewtonCotesRule, grid: UniformGrid) -> np.ndarray:
    """Composite weights w_0..w_N for the rule on the given grid."""
    n = grid.n_intervals
    rule.check_admissible(n)
    h = grid.step
    if rule.name == "trapezoid":
        w = np.full(n + 1, h)
        w[0] = w[n] = 0.5 * h
        return w
    if rule.name == "simpson":
        c = np.empty(n + 1)
        c[0::2] = 2.0
        c[1::2] = 4.0
        c[0] = c[n] = 1.0
        return c * (h / 3.0)
    if rule.name == "boole":
        c = np.empty(n + 1)
        idx = np.arange(n + 1)
        c[idx % 4 == 0] = 14.0
        c[idx % 4 == 2] = 12.0
        c[idx % 2 == 1] = 32.0
        c[0] = c[n] = 7.0
        return c * (2.0 * h / 45.0)
    raise ValueError(f"unsupported rule {rule!r}")


def integrate(
    rule: NewtonCotesRule,
    density: GridDensity,
    precision: PrecisionMode = PrecisionMode.NATIVE64,
) -> float:
    """Quadrature estimate sum_j w_j v_j, accumulated left to right."""
    w = weights(rule, density.grid)
    if precision is PrecisionMode.EMULATED32:
        return float(
            _kernels.dot_f32(
                w.astype(np.float32),
                density.values.astype(np.float32, copy=False),
            )
        )
    return float(_kernels.dot_f64(w, density.values.astype(np.float64, copy=False)))
