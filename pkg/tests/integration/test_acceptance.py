"""
Desk-scale acceptance runs. Slow; select with `pytest -m slow`.
"""

import os

import numpy as np
import pytest

from src.experiments import build_experiment_config, run_fig1, run_fig2, run_validate
from src.se_closed_form import sinr_ls, sinr_mmse

pytestmark = pytest.mark.slow

THREADS = max(1, os.cpu_count() or 1)


def by_key(rows, *keys):
    return {tuple(row[k] for k in keys): row for row in rows}


class TestMonteCarloAgreement:
    """Test closed forms against 10^5 Monte Carlo trials."""

    def test_validate_preset(self, tmp_path):
        """Test every UE, estimator, fading mode and antenna count."""
        experiment = build_experiment_config(scenario='validate', overrides={'output': str(tmp_path / 'v.csv')})
        result = run_validate(experiment, threads=THREADS)
        assert len(result.reports) == 2 * 2 * 2 * 8
        failed = [r for r in result.reports if not (r.passed and r.within_target)]
        assert not failed, failed


class TestRouteEquivalence:
    """Test both SINR assemblies on many random contaminated configurations."""

    def test_thousand_configs(self, random_cell):
        """Test 1000 configurations with M <= 8, L <= 4, K <= 2."""
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            cell = random_cell(
                rng,
                M=int(rng.integers(1, 9)),
                L=int(rng.integers(1, 5)),
                K=int(rng.integers(1, 3)),
                rayleigh=bool(rng.integers(2)),
            )
            target = int(rng.integers(cell.num_ues))
            for result in (sinr_mmse(cell, target), sinr_ls(cell, target)):
                assert result.sinr == pytest.approx(result.sinr_raw, rel=1e-10)


class TestFigureShapes:
    """Test the qualitative behaviour of the full 16-cell setup."""

    def test_antenna_sweep(self, tmp_path):
        """Test MMSE >= LS, Rician >= Rayleigh and a gap that grows with M."""
        experiment = build_experiment_config(scenario='paper-fig1', overrides={'output': str(tmp_path / 'f1.csv')})
        rows = by_key(run_fig1(experiment, threads=THREADS).rows, 'M', 'estimator', 'fading')
        for M in experiment.sweep:
            for fading in ('rician', 'rayleigh'):
                assert rows[(M, 'mmse', fading)]['mean_sum_se'] >= rows[(M, 'ls', fading)]['mean_sum_se']
            for estimator in ('mmse', 'ls'):
                assert rows[(M, estimator, 'rician')]['mean_sum_se'] >= rows[(M, estimator, 'rayleigh')]['mean_sum_se']

        def gap(M):
            return rows[(M, 'mmse', 'rician')]['mean_sum_se'] - rows[(M, 'ls', 'rician')]['mean_sum_se']

        assert gap(100) > gap(10)

    def test_se_cdf(self, tmp_path):
        """Test Rician CDFs lie right of Rayleigh and MMSE helps weak UEs most."""
        experiment = build_experiment_config(scenario='paper-fig2', overrides={'output': str(tmp_path / 'f2.csv')})
        result = run_fig2(experiment, threads=THREADS)
        levels = np.linspace(0.1, 0.9, 9)

        def quantiles(estimator, fading):
            se = [r.se for r in result.ue_results if (r.estimator, r.fading) == (estimator, fading)]
            return np.quantile(se, levels)

        for estimator in ('mmse', 'ls'):
            assert np.all(quantiles(estimator, 'rician') >= quantiles(estimator, 'rayleigh'))
        gaps = quantiles('mmse', 'rician') - quantiles('ls', 'rician')
        assert gaps[0] > gaps[-1]
