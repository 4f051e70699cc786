"""User-facing estimation of left-tail probabilities.

Combines density sampling, the convolution schedule and Newton-Cotes
quadrature into a single computation of

    alpha = P(X_1 + ... + X_n < gamma)

for a list of independent non-negative factors, together with the
density of the sum at gamma.  When the configuration is a pure
chi-squared or pure Levy family the exact law of the sum is attached as
a reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .distributions import (
    DistKind,
    Distribution,
    boundary_class,
    chi_squared,
    exact_sum_cdf,
    levy,
)
from .grid_convolution import (
    ConvBackend,
    DIRECT64,
    GridDensity,
    UniformGrid,
    convolve,
    sample_pdf,
    self_conv_power,
)
from .quadrature import BOOLE, NewtonCotesRule, integrate

Factors = Sequence[tuple[Distribution, int]]


@dataclass(frozen=True)
class EstimatorConfig:
    """Problem definition: factors X_1..X_n, the threshold gamma, and the
    numerical parameters (grid size, backend, quadrature rule).

    ``endpoint_override`` forces the endpoint-corrected convolution on
    or off; None selects it automatically from the factors' boundary
    classes (used whenever some factor's density or first derivative
    does not vanish at zero).
    """

    factors: tuple[tuple[Distribution, int], ...]
    gamma: float
    n_intervals: int
    backend: ConvBackend = DIRECT64
    rule: NewtonCotesRule = BOOLE
    endpoint_override: Optional[bool] = None

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("at least one factor is required")
        for dist, count in self.factors:
            if count < 1:
                raise ValueError(f"factor count must be >= 1, got {count} for {dist}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        self.rule.check_admissible(self.n_intervals)

    @property
    def total_count(self) -> int:
        return sum(count for _, count in self.factors)


def config(
    factors: Factors,
    gamma: float,
    n_intervals: int,
    backend: ConvBackend = DIRECT64,
    rule: NewtonCotesRule = BOOLE,
    endpoint_override: Optional[bool] = None,
) -> EstimatorConfig:
    """Convenience constructor accepting any factor sequence."""
    return EstimatorConfig(
        factors=tuple((dist, int(count)) for dist, count in factors),
        gamma=float(gamma),
        n_intervals=int(n_intervals),
        backend=backend,
        rule=rule,
        endpoint_override=endpoint_override,
    )


@dataclass
class EstimateReport:
    """Estimate plus the configuration echo and optional exact reference.

    For direct convolution in 64-bit arithmetic alpha_hat lies in
    [0, 1 + tiny overshoot from quadrature of the truncated density].
    Emulated 32-bit FFT runs may legitimately report values outside
    that range; they are the rounding-blow-up signal and are not
    clamped.
    """

    alpha_hat: float
    density_at_gamma: float
    grid: UniformGrid
    backend: str
    precision: str
    rule: str
    endpoint: bool
    reference_alpha: Optional[float] = None
    relative_error: Optional[float] = None
    adjusted_n: Optional[int] = None


def _auto_endpoint(factors: Factors) -> bool:
    return any(boundary_class(dist).needs_endpoint_rule for dist, _ in factors)


def _merged_groups(factors: Factors) -> list[tuple[Distribution, int]]:
    groups: list[tuple[Distribution, int]] = []
    for dist, count in factors:
        if groups and groups[-1][0] == dist:
            groups[-1] = (dist, groups[-1][1] + count)
        else:
            groups.append((dist, count))
    return groups


def build_sum_density(
    factors: Factors,
    grid: UniformGrid,
    backend: ConvBackend = DIRECT64,
    endpoint: Optional[bool] = None,
) -> GridDensity:
    """Density of the sum on the grid: each distinct factor is sampled
    once, identical runs are raised to their convolution power, and the
    group results are folded left to right."""
    if endpoint is None:
        endpoint = _auto_endpoint(factors)
    samples: dict[Distribution, GridDensity] = {}
    result: Optional[GridDensity] = None
    for dist, count in _merged_groups(factors):
        if dist not in samples:
            samples[dist] = sample_pdf(dist, grid, backend.precision)
        part = self_conv_power(samples[dist], count, backend, endpoint)
        result = part if result is None else convolve(result, part, backend, endpoint)
    assert result is not None
    return result


def _reference_alpha(factors: Factors, gamma: float) -> Optional[float]:
    kinds = {dist.kind for dist, _ in factors}
    if len(kinds) != 1:
        return None
    kind = kinds.pop()
    if kind is DistKind.CHI_SQUARED:
        total_df = sum(int(dist.param("df")) * count for dist, count in factors)
        return exact_sum_cdf(chi_squared(total_df), 1, gamma)
    if kind is DistKind.LEVY:
        # the sum of independent Levy(0, c_i) is Levy(0, (sum sqrt(c_i))^2)
        sqrt_c = sum(dist.param("c") ** 0.5 * count for dist, count in factors)
        return exact_sum_cdf(levy(sqrt_c * sqrt_c), 1, gamma)
    return None


def tail_probability(cfg: EstimatorConfig) -> EstimateReport:
    """Estimate P(sum < gamma) with the configured grid, backend and rule."""
    grid = UniformGrid(cfg.gamma, cfg.n_intervals)
    endpoint = cfg.endpoint_override
    if endpoint is None:
        endpoint = _auto_endpoint(cfg.factors)
    density = build_sum_density(cfg.factors, grid, cfg.backend, endpoint)
    alpha_hat = integrate(cfg.rule, density, cfg.backend.precision)
    reference = _reference_alpha(cfg.factors, cfg.gamma)
    relative_error = None
    if reference is not None and reference > 0:
        relative_error = abs(alpha_hat - reference) / reference
    return EstimateReport(
        alpha_hat=alpha_hat,
        density_at_gamma=float(density.values[-1]),
        grid=grid,
        backend=cfg.backend.kind.value,
        precision=cfg.backend.precision.value,
        rule=cfg.rule.name,
        endpoint=endpoint,
        reference_alpha=reference,
        relative_error=relative_error,
    )


def density_at_gamma(cfg: EstimatorConfig) -> float:
    """Value of the n-fold convolution at the last grid node x_N."""
    grid = UniformGrid(cfg.gamma, cfg.n_intervals)
    endpoint = cfg.endpoint_override
    if endpoint is None:
        endpoint = _auto_endpoint(cfg.factors)
    density = build_sum_density(cfg.factors, grid, cfg.backend, endpoint)
    return float(density.values[-1])
