"""Command-line interface.

Subcommands mirror the library's studies: point estimation, convergence
sweeps, precision comparison, cost benchmarks and the Monte Carlo
cross-check.  Output is CSV (or JSON for `estimate`); the sweep
commands can additionally render a matplotlib figure next to the CSV
via --plot.

When a requested mesh size does not satisfy the quadrature rule's
divisibility constraint it is rounded up to the nearest admissible
value and the adjustment is recorded in the output metadata; the
library API is strict instead.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import Optional

import click

from .distributions import Distribution, parse_distribution, split_spec_list
from .estimator import EstimateReport, config, tail_probability
from .experiments import (
    mc_oracle,
    render_csv,
    run_convergence_study,
    run_cost_benchmark,
    run_precision_comparison,
)
from .fft import PrecisionMode
from .grid_convolution import BackendKind, ConvBackend
from .quadrature import BOOLE, rule_by_name

_PRECISIONS = {"64": PrecisionMode.NATIVE64, "32emu": PrecisionMode.EMULATED32}


def _parse_factors(dist_text: str, counts_text: str) -> list[tuple[Distribution, int]]:
    specs = split_spec_list(dist_text)
    if not specs:
        raise click.BadParameter("no distribution specs given", param_hint="--dist")
    counts = [c.strip() for c in counts_text.split(",") if c.strip()]
    if len(counts) == 1 and len(specs) > 1:
        counts = counts * len(specs)
    if len(counts) != len(specs):
        raise click.BadParameter(
            f"{len(specs)} specs but {len(counts)} counts", param_hint="--counts"
        )
    try:
        dists = [parse_distribution(s) for s in specs]
        return [(d, int(c)) for d, c in zip(dists, counts)]
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--dist") from None


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as handle:
            handle.write(text)


def _backend(name: str, precision: str) -> ConvBackend:
    return ConvBackend(BackendKind(name), _PRECISIONS[precision])


@click.group()
def main() -> None:
    """Left-tail probabilities of sums of non-negative random variables
    by iterative grid convolution."""


@main.command()
@click.option("--dist", required=True, help="Distribution spec(s), e.g. levy(c=0.1)")
@click.option("--counts", required=True, help="Factor counts, e.g. 16 or 8,8")
@click.option("--gamma", type=float, required=True)
@click.option("--n", "n_intervals", type=int, required=True, help="Mesh intervals N")
@click.option("--rule", default="boole", type=click.Choice(["trapezoid", "simpson", "boole"]))
@click.option("--backend", default="direct", type=click.Choice(["direct", "fft"]))
@click.option("--precision", default="64", type=click.Choice(["64", "32emu"]))
@click.option("--endpoint", default="auto", type=click.Choice(["auto", "on", "off"]))
@click.option("--format", "fmt", default="csv", type=click.Choice(["csv", "json"]))
@click.option("--output", "-o", default=None, help="Output path ('-' = stdout)")
def estimate(dist, counts, gamma, n_intervals, rule, backend, precision, endpoint, fmt, output):
    """Estimate P(sum < gamma) for the given factors."""
    factors = _parse_factors(dist, counts)
    the_rule = rule_by_name(rule)
    adjusted = the_rule.round_up(n_intervals)
    override = {"auto": None, "on": True, "off": False}[endpoint]
    cfg = config(
        factors,
        gamma,
        adjusted,
        backend=_backend(backend, precision),
        rule=the_rule,
        endpoint_override=override,
    )
    report = tail_probability(cfg)
    if adjusted != n_intervals:
        report.adjusted_n = adjusted
    _emit(_render_report(report, fmt), output)


@dataclass
class _ReportRow:
    gamma: float
    n_intervals: int
    step: float
    backend: str
    precision: str
    rule: str
    endpoint: bool
    alpha_hat: float
    density_at_gamma: float
    reference_alpha: Optional[float]
    relative_error: Optional[float]
    adjusted_n: Optional[int]


def _report_row(report: EstimateReport) -> _ReportRow:
    return _ReportRow(
        gamma=report.grid.gamma,
        n_intervals=report.grid.n_intervals,
        step=report.grid.step,
        backend=report.backend,
        precision=report.precision,
        rule=report.rule,
        endpoint=report.endpoint,
        alpha_hat=report.alpha_hat,
        density_at_gamma=report.density_at_gamma,
        reference_alpha=report.reference_alpha,
        relative_error=report.relative_error,
        adjusted_n=report.adjusted_n,
    )


def _render_report(report: EstimateReport, fmt: str) -> str:
    row = _report_row(report)
    if fmt == "json":
        return json.dumps(row.__dict__, indent=2) + "\n"
    return render_csv([row])


@main.command()
@click.option("--dist", required=True)
@click.option("--counts", required=True)
@click.option("--gamma", type=float, required=True)
@click.option("--nmax", type=int, default=2**18, show_default=True)
@click.option("--nstart", type=int, default=2**7, show_default=True)
@click.option("--eps", type=float, default=1e-8, show_default=True)
@click.option("--rules", default="trapezoid,simpson,boole", show_default=True)
@click.option("--output", "-o", default=None)
@click.option("--plot", default=None, help="Also render a PNG figure to this path")
def converge(dist, counts, gamma, nmax, nstart, eps, rules, output, plot):
    """Convergence-rate sweep against a Boole pseudo-reference."""
    factors = _parse_factors(dist, counts)
    rule_list = [rule_by_name(r) for r in rules.split(",") if r.strip()]
    divisor = max([BOOLE.divisibility] + [r.divisibility for r in rule_list])
    adj_start = ((nstart + divisor - 1) // divisor) * divisor
    adj_max = ((nmax + divisor - 1) // divisor) * divisor
    if (adj_start, adj_max) != (nstart, nmax):
        click.echo(f"note: adjusted sweep to nstart={adj_start}, nmax={adj_max}", err=True)
    study = run_convergence_study(factors, gamma, adj_max, adj_start, eps, rule_list)
    from .experiments import convergence_csv

    _emit(convergence_csv(study), output)
    if plot:
        from .plots import render_convergence

        render_convergence(study, plot)


@main.command()
@click.option("--dist", required=True)
@click.option("--counts", required=True)
@click.option("--gammas", required=True, help="Comma-separated thresholds")
@click.option("--n", "n_intervals", type=int, required=True)
@click.option("--pseudo-ref-n", type=int, default=None, help="Pseudo-reference mesh when no exact law exists")
@click.option("--output", "-o", default=None)
@click.option("--plot", default=None)
def precision(dist, counts, gammas, n_intervals, pseudo_ref_n, output, plot):
    """Backend/precision comparison of relative errors."""
    factors = _parse_factors(dist, counts)
    gamma_list = [float(g) for g in gammas.split(",") if g.strip()]
    adjusted = BOOLE.round_up(n_intervals)
    if adjusted != n_intervals:
        click.echo(f"note: adjusted N to {adjusted}", err=True)
    rows = run_precision_comparison(factors, gamma_list, adjusted, pseudo_reference_n=pseudo_ref_n)
    _emit(render_csv(rows), output)
    if plot:
        from .plots import render_precision

        render_precision(rows, plot)


@main.command()
@click.option("--sizes", required=True, help="Comma-separated mesh sizes, increasing")
@click.option("--count", type=int, default=16, show_default=True)
@click.option("--backends", default="direct,fft", show_default=True)
@click.option("--repeats", type=int, default=5, show_default=True)
@click.option("--output", "-o", default=None)
@click.option("--plot", default=None)
def bench(sizes, count, backends, repeats, output, plot):
    """Wall-time scaling of the convolution backends."""
    size_list = [int(s) for s in sizes.split(",") if s.strip()]
    backend_list = [_backend(b.strip(), "64") for b in backends.split(",") if b.strip()]
    rows = run_cost_benchmark(size_list, count, backend_list, repeats=repeats)
    _emit(render_csv(rows), output)
    if plot:
        from .plots import render_bench

        render_bench(rows, plot)


@main.command()
@click.option("--dist", required=True)
@click.option("--counts", required=True)
@click.option("--gamma", type=float, required=True)
@click.option("--samples", type=int, default=10**6, show_default=True)
@click.option("--seed", type=int, default=20240, show_default=True)
@click.option("--output", "-o", default=None)
def mc(dist, counts, gamma, samples, seed, output):
    """Naive Monte Carlo cross-check (chi-squared, Levy, log-normal)."""
    factors = _parse_factors(dist, counts)
    estimate_row = mc_oracle(factors, gamma, samples, seed)
    _emit(render_csv([estimate_row]), output)


if __name__ == "__main__":
    main()
