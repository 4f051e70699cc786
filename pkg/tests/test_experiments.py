import math
import re

import numpy as np
import pytest

from convtail.distributions import chi_squared, levy, rayleigh, rice
from convtail.experiments import (
    BenchRow,
    ConvergenceRow,
    convergence_csv,
    fit_convergence_order,
    mc_oracle,
    render_csv,
    rounding_floor,
    run_convergence_study,
    run_cost_benchmark,
    run_precision_comparison,
)
from convtail.fft import PrecisionMode
from convtail.quadrature import BOOLE, SIMPSON
from convtail.special_functions import reg_lower_gamma


def make_rows(n_values, deltas, rule="boole"):
    return [ConvergenceRow(rule, n, 1.0, d) for n, d in zip(n_values, deltas)]


class TestFitConvergenceOrder:
    def test_exact_quadratic_decay(self):
        ns = [2**k for k in range(5, 12)]
        rows = make_rows(ns, [n**-2.0 for n in ns])
        assert fit_convergence_order(rows) == pytest.approx(2.0, abs=1e-9)

    def test_two_point_fallback(self):
        rows = make_rows([100, 400], [1e-2, 1e-2 / 16.0])
        assert fit_convergence_order(rows) == pytest.approx(2.0, abs=1e-12)

    def test_noisy_quartic_decay(self):
        rng = np.random.default_rng(42)
        ns = [2**k for k in range(5, 13)]
        rows = make_rows(ns, [n**-4.0 * (1.0 + 0.05 * rng.uniform(-1, 1)) for n in ns])
        slope = fit_convergence_order(rows)
        assert 3.8 <= slope <= 4.2

    def test_rejects_degenerate_input(self):
        with pytest.raises(ValueError):
            fit_convergence_order(make_rows([64], [1e-3]))
        with pytest.raises(ValueError):
            fit_convergence_order(make_rows([64, 128], [0.0, 0.0]))


class TestRoundingFloor:
    def test_scales_linearly(self):
        assert rounding_floor(16, 1024, PrecisionMode.NATIVE64) == pytest.approx(
            4 * 16 * 1024 * 2.0**-53
        )
        assert rounding_floor(16, 1024, PrecisionMode.EMULATED32) == pytest.approx(
            4 * 16 * 1024 * 2.0**-24
        )


class TestConvergenceStudy:
    def test_levy_study_halts_and_is_high_order(self):
        study = run_convergence_study(
            [(levy(0.1), 16)], 0.8, n_max=2**11, n_start=2**7, epsilon=1e-8, rules=[BOOLE]
        )
        ns = [r.n_intervals for r in study.rows]
        assert ns == sorted(ns)
        assert ns[0] == 2**7 and ns[-1] <= 2**10
        assert study.rows[-1].relative_error < 1e-8  # halted by convergence
        assert study.slopes["boole"] > 4.0
        assert study.reference_n == 2**11

    def test_rows_per_rule_and_order(self):
        study = run_convergence_study(
            [(chi_squared(6), 4)],
            2.0,
            n_max=2**10,
            n_start=2**6,
            epsilon=1e-10,
            rules=[SIMPSON, BOOLE],
        )
        per_rule = {"simpson": [], "boole": []}
        for row in study.rows:
            per_rule[row.rule].append(row.n_intervals)
        for ns in per_rule.values():
            assert ns == sorted(ns) and len(set(ns)) == len(ns)

    def test_rejects_bad_span(self):
        with pytest.raises(ValueError):
            run_convergence_study([(levy(0.1), 2)], 1.0, 128, 128, 1e-8, [BOOLE])


class TestPrecisionComparison:
    def test_non_rare_regime_backends_agree(self):
        # without rarity there is no cancellation signal: the backends
        # produce the same estimate, so their error columns coincide
        # (the 32-bit pipeline keeps its ~1e-7 epsilon floor)
        rows = run_precision_comparison([(levy(0.1), 16)], [32.0], 2**10)
        row = rows[0]
        assert row.alpha_ref > 0.3  # not a rare event
        assert abs(row.delta_fft64 - row.delta_direct64) <= 1e-9
        assert abs(row.delta_fft32emu - row.delta_direct64) <= 1e-5

    def test_rows_sorted_by_gamma(self):
        rows = run_precision_comparison([(levy(0.1), 4)], [2.0, 0.5, 1.0], 256)
        assert [r.gamma for r in rows] == [0.5, 1.0, 2.0]

    def test_pseudo_reference_path(self):
        # order-2 regime: the N=256 vs N=1024 gap is ~h^2
        rows = run_precision_comparison(
            [(rayleigh(1.0), 4)], [2.0], 256, pseudo_reference_n=1024
        )
        assert 0 < rows[0].delta_direct64 < 1e-3

    def test_pseudo_reference_required_without_exact_law(self):
        with pytest.raises(ValueError):
            run_precision_comparison([(rice(1.0), 4)], [1.0], 256)


class TestCostBenchmark:
    def test_smoke_rows(self):
        rows = run_cost_benchmark([256, 512], 4, repeats=1)
        assert [(r.backend, r.n_intervals) for r in rows] == [
            ("direct", 256),
            ("direct", 512),
            ("fft", 256),
            ("fft", 512),
        ]
        assert all(r.wall_time > 0 for r in rows)

    def test_rejects_unsorted_sizes(self):
        with pytest.raises(ValueError):
            run_cost_benchmark([512, 256], 4, repeats=1)


class TestMcOracle:
    def test_chisq_within_four_standard_errors(self):
        estimate = mc_oracle([(chi_squared(1), 16)], 8.0, 10**5, seed=20240)
        exact = reg_lower_gamma(8.0, 4.0)
        assert abs(estimate.alpha_hat - exact) <= 4 * estimate.std_error
        assert estimate.std_error == pytest.approx(
            math.sqrt(estimate.alpha_hat * (1 - estimate.alpha_hat) / 10**5)
        )

    def test_sure_event(self):
        estimate = mc_oracle([(chi_squared(1), 16)], 1e6, 1000, seed=1)
        assert estimate.alpha_hat == 1.0
        assert estimate.std_error == 0.0

    def test_rare_levy_event_never_sampled(self):
        estimate = mc_oracle([(levy(0.1), 16)], 1.0, 10**6, seed=7)
        assert estimate.alpha_hat <= 10 / 10**6

    def test_deterministic(self):
        a = mc_oracle([(levy(0.1), 4)], 2.0, 10**4, seed=99)
        b = mc_oracle([(levy(0.1), 4)], 2.0, 10**4, seed=99)
        assert a == b

    def test_validates_sample_count(self):
        with pytest.raises(ValueError):
            mc_oracle([(chi_squared(1), 1)], 1.0, 999, seed=0)

    def test_unsupported_distribution(self):
        from convtail.distributions import UnsupportedSamplingError

        with pytest.raises(UnsupportedSamplingError):
            mc_oracle([(rice(1.0), 2)], 1.0, 1000, seed=0)


class TestCsvRendering:
    def test_format_contract(self):
        rows = [BenchRow("direct", 256, 0.012345678912345)]
        text = render_csv(rows)
        lines = text.split("\n")
        assert lines[0] == "backend,n_intervals,wall_time"
        assert re.fullmatch(r"direct,256,1\.234567891e-02", lines[1])
        assert text.endswith("\n") and "\r" not in text

    def test_scientific_notation_has_enough_digits(self):
        text = render_csv([BenchRow("fft", 8, 3.0)])
        assert "3.000000000e+00" in text

    def test_deterministic_across_runs(self):
        def run():
            study = run_convergence_study(
                [(levy(0.1), 4)], 0.8, n_max=2**9, n_start=2**7, epsilon=1e-10, rules=[BOOLE]
            )
            return convergence_csv(study)

        assert run() == run()

    def test_convergence_csv_carries_fitted_order(self):
        study = run_convergence_study(
            [(levy(0.1), 4)], 0.8, n_max=2**9, n_start=2**7, epsilon=1e-10, rules=[BOOLE]
        )
        header = convergence_csv(study).split("\n", 1)[0]
        assert header == "rule,n_intervals,alpha_hat,relative_error,fitted_order"

    def test_empty_rows_rejected(self):
        with pytest.raises(ValueError):
            render_csv([])
