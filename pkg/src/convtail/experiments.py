"""Study harness: convergence sweeps, precision comparisons, cost
benchmarks and a naive Monte Carlo cross-check.

All outputs are plain row dataclasses; ``render_csv`` turns them into
deterministic CSV text (LF line endings, scientific notation).  Wall
times in benchmark rows are of course machine-dependent; every other
output is byte-identical across runs for a fixed configuration and
seed.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np

from .distributions import levy, sample
from .estimator import Factors, build_sum_density, config, tail_probability
from .fft import PrecisionMode
from .grid_convolution import ConvBackend, UniformGrid, sample_pdf, self_conv_power
from .quadrature import BOOLE, NewtonCotesRule, integrate

# rows whose relative error sits below 100x the direct-convolution
# rounding floor 4*n*N*eps belong to the rounding plateau, not to the
# discretization-error regime, and are excluded from slope fits
PLATEAU_FACTOR = 100.0


@dataclass
class ConvergenceRow:
    rule: str
    n_intervals: int
    alpha_hat: float
    relative_error: float


@dataclass
class ConvergenceStudy:
    rows: list[ConvergenceRow]
    slopes: dict[str, float]
    reference_alpha: float
    reference_n: int


@dataclass
class PrecisionRow:
    gamma: float
    alpha_ref: float
    delta_direct64: float
    delta_fft64: float
    delta_fft32emu: float


@dataclass
class BenchRow:
    backend: str
    n_intervals: int
    wall_time: float


@dataclass
class McEstimate:
    alpha_hat: float
    std_error: float
    samples: int
    seed: int


def fit_convergence_order(rows: Sequence[ConvergenceRow]) -> float:
    """Least-squares slope of log(delta) against log(N), negated.

    Rows with non-positive error are unusable.  Two usable rows give
    the exact two-point slope (the degenerate least-squares line);
    fewer than two is an error.
    """
    usable = [(r.n_intervals, r.relative_error) for r in rows if r.relative_error > 0]
    if len(usable) < 2:
        raise ValueError(f"need at least 2 rows with positive error, got {len(usable)}")
    log_n = np.log([n for n, _ in usable])
    log_d = np.log([d for _, d in usable])
    slope = np.polyfit(log_n, log_d, 1)[0]
    return float(-slope)


def rounding_floor(total_count: int, n_intervals: int, precision: PrecisionMode) -> float:
    """Relative-error scale of accumulated direct-convolution rounding,
    4*n*N*eps."""
    return 4.0 * total_count * n_intervals * precision.machine_epsilon


def run_convergence_study(
    factors: Factors,
    gamma: float,
    n_max: int,
    n_start: int,
    epsilon: float,
    rules: Sequence[NewtonCotesRule],
    backend: ConvBackend = ConvBackend.direct(),
    endpoint: Optional[bool] = None,
) -> ConvergenceStudy:
    """Doubling sweep against a high-resolution pseudo-reference.

    The pseudo-reference is the Boole-rule estimate at ``n_max``.  The
    mesh is doubled from ``n_start`` until every rule's relative error
    drops below ``epsilon`` or N reaches ``n_max``/2.  Slopes are
    fitted per rule on the plateau-filtered rows.
    """
    if n_start >= n_max:
        raise ValueError(f"n_start={n_start} must be far below n_max={n_max}")
    BOOLE.check_admissible(n_max)
    for rule in rules:
        rule.check_admissible(n_start)

    ref_grid = UniformGrid(gamma, n_max)
    ref_density = build_sum_density(factors, ref_grid, backend, endpoint)
    reference = integrate(BOOLE, ref_density, backend.precision)

    total = sum(count for _, count in factors)
    rows: list[ConvergenceRow] = []
    n = n_start
    while n <= n_max // 2:
        grid = UniformGrid(gamma, n)
        density = build_sum_density(factors, grid, backend, endpoint)
        all_converged = True
        for rule in rules:
            alpha = integrate(rule, density, backend.precision)
            delta = abs(alpha - reference) / reference
            rows.append(ConvergenceRow(rule.name, n, alpha, delta))
            if delta >= epsilon:
                all_converged = False
        if all_converged:
            break
        n *= 2

    slopes: dict[str, float] = {}
    for rule in rules:
        kept = [
            r
            for r in rows
            if r.rule == rule.name
            and r.relative_error
            > PLATEAU_FACTOR * rounding_floor(total, r.n_intervals, backend.precision)
        ]
        slopes[rule.name] = fit_convergence_order(kept)
    return ConvergenceStudy(rows, slopes, reference, n_max)


def run_precision_comparison(
    factors: Factors,
    gammas: Sequence[float],
    n_intervals: int,
    rule: NewtonCotesRule = BOOLE,
    pseudo_reference_n: Optional[int] = None,
) -> list[PrecisionRow]:
    """Relative error per gamma for direct 64-bit, FFT 64-bit and FFT in
    emulated 32-bit arithmetic, against the exact sum law (or a Boole
    pseudo-reference when no exact law exists)."""
    backends = (
        ConvBackend.direct(),
        ConvBackend.fft(),
        ConvBackend.fft(PrecisionMode.EMULATED32),
    )
    out: list[PrecisionRow] = []
    for gamma in sorted(gammas):
        base = config(factors, gamma, n_intervals, rule=rule)
        reference = tail_probability(base).reference_alpha
        if reference is None:
            if pseudo_reference_n is None:
                raise ValueError(
                    "no exact sum law for these factors; pass pseudo_reference_n"
                )
            reference = tail_probability(
                config(factors, gamma, pseudo_reference_n, rule=BOOLE)
            ).alpha_hat
        deltas = []
        for backend in backends:
            cfg = config(factors, gamma, n_intervals, backend=backend, rule=rule)
            alpha = tail_probability(cfg).alpha_hat
            deltas.append(abs(alpha - reference) / reference)
        out.append(PrecisionRow(gamma, reference, *deltas))
    return out


def run_cost_benchmark(
    sizes: Sequence[int],
    count: int,
    backends: Sequence[ConvBackend] = (ConvBackend.direct(), ConvBackend.fft()),
    repeats: int = 5,
    gamma: float = 0.8,
) -> list[BenchRow]:
    """Median-of-``repeats`` wall time of the n-fold convolution per
    (backend, N), after one warm-up run."""
    if sorted(sizes) != list(sizes):
        raise ValueError("sizes must be increasing")
    test_dist = levy(0.1)
    out: list[BenchRow] = []
    for backend in backends:
        for n in sizes:
            grid = UniformGrid(gamma, n)
            density = sample_pdf(test_dist, grid, backend.precision)
            self_conv_power(density, count, backend)  # warm-up
            times = []
            for _ in range(repeats):
                start = time.perf_counter()
                self_conv_power(density, count, backend)
                times.append(time.perf_counter() - start)
            out.append(BenchRow(backend.kind.value, n, statistics.median(times)))
    return out


def mc_oracle(factors: Factors, gamma: float, samples: int, seed: int) -> McEstimate:
    """Naive Monte Carlo estimate of P(sum < gamma) with binomial
    standard error; deterministic for a fixed seed."""
    if samples < 1000:
        raise ValueError(f"samples must be >= 1000, got {samples}")
    rng = np.random.default_rng(seed)
    totals = np.zeros(samples)
    for dist, count in factors:
        for _ in range(count):
            totals += sample(dist, samples, rng)
    alpha = float(np.count_nonzero(totals < gamma)) / samples
    std_error = math.sqrt(alpha * (1.0 - alpha) / samples)
    return McEstimate(alpha_hat=alpha, std_error=std_error, samples=samples, seed=seed)


# CSV rendering --------------------------------------------------------------


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9e}"
    return str(value)


def render_csv(rows: Sequence, columns: Optional[Sequence[str]] = None) -> str:
    """Rows of one dataclass type to CSV text: header line, '.' decimal
    separator, scientific notation with 10 significant digits, LF
    endings."""
    if not rows:
        raise ValueError("no rows to render")
    if columns is None:
        columns = [f.name for f in fields(rows[0])]
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(getattr(row, col)) for col in columns))
    return "\n".join(lines) + "\n"


def convergence_csv(study: ConvergenceStudy) -> str:
    """Study rows plus the fitted order, repeated on each rule's rows."""

    @dataclass
    class _Row:
        rule: str
        n_intervals: int
        alpha_hat: float
        relative_error: float
        fitted_order: float

    rows = [
        _Row(r.rule, r.n_intervals, r.alpha_hat, r.relative_error, study.slopes[r.rule])
        for r in study.rows
    ]
    return render_csv(rows)
