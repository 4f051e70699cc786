"""Figure rendering for the study commands.

Each function draws one figure from the corresponding row set and
writes it to a file next to the CSV output.  The CSV remains the data
contract; figures are a convenience view of the same rows.
"""

from __future__ import annotations

from typing import Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .experiments import BenchRow, ConvergenceStudy, PrecisionRow


def _save(fig: Figure, path: str) -> None:
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=150, bbox_inches="tight")


def render_convergence(study: ConvergenceStudy, path: str) -> None:
    """Log-log relative error against mesh size, one line per rule,
    annotated with the fitted order."""
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.subplots()
    rules = sorted({r.rule for r in study.rows})
    for rule in rules:
        pts = [(r.n_intervals, r.relative_error) for r in study.rows if r.rule == rule]
        ns = [n for n, _ in pts]
        ds = [d for _, d in pts]
        ax.loglog(ns, ds, marker="o", label=f"{rule} (order {study.slopes[rule]:.2f})")
    ax.set_xlabel("mesh intervals N")
    ax.set_ylabel("relative error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, path)


def render_precision(rows: Sequence[PrecisionRow], path: str) -> None:
    """Relative error per backend as a function of the threshold."""
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.subplots()
    gammas = [r.gamma for r in rows]
    for label, attr in (
        ("direct 64-bit", "delta_direct64"),
        ("fft 64-bit", "delta_fft64"),
        ("fft 32-bit emulated", "delta_fft32emu"),
    ):
        ax.semilogy(gammas, [getattr(r, attr) for r in rows], marker="o", label=label)
    ax.set_xlabel("gamma")
    ax.set_ylabel("relative error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, path)


def render_bench(rows: Sequence[BenchRow], path: str) -> None:
    """Log-log wall time against mesh size, one line per backend."""
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.subplots()
    backends = sorted({r.backend for r in rows})
    for backend in backends:
        pts = [(r.n_intervals, r.wall_time) for r in rows if r.backend == backend]
        ax.loglog([n for n, _ in pts], [t for _, t in pts], marker="o", label=backend)
    ax.set_xlabel("mesh intervals N")
    ax.set_ylabel("wall time [s]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, path)
