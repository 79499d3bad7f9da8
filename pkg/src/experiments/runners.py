"""
Experiment runners: antenna sweep of the average sum SE, per-UE SE CDF and Monte
Carlo validation.

Drops run in parallel threads; their rows are collected and written in drop order, so
the CSV files do not depend on the thread count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple, TypeVar

import numpy as np
import structlog

from ..estimation.serving_cell import estimation_mse
from ..monte_carlo.rng import STREAM_LAYOUT, substream
from ..monte_carlo.validation import SeReport, validate
from ..network.realization import NetworkRealization, realize_network
from ..se_closed_form.network_eval import evaluate_network
from .config import ExperimentConfig
from .output import (
    FIG1_COLUMNS,
    FIG2_COLUMNS,
    PER_UE_COLUMNS,
    VALIDATE_COLUMNS,
    emit_plot_script,
    write_csv,
)

logger = structlog.get_logger(__name__)

T = TypeVar('T')


@dataclass(frozen=True)
class UeResult:
    """Closed-form result of one UE in one (drop, fading, M, estimator) case."""
    drop: int
    cell: int
    ue: int
    serving_bs: int
    antennas: int
    estimator: str
    fading: str
    sinr: float
    se: float
    mse: float

    def as_row(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in PER_UE_COLUMNS}


@dataclass(frozen=True)
class ExperimentResult:
    """Rows written to the main CSV, plus the per-UE results and validation reports."""
    output: Path
    rows: List[Dict[str, Any]]
    ue_results: List[UeResult]
    reports: List[SeReport]
    plot_script: Optional[Path] = None

    @property
    def all_passed(self) -> bool:
        return all(report.passed for report in self.reports)


def realize_drop(experiment: ExperimentConfig, drop: int) -> NetworkRealization:
    """Base realization of a drop (first sweep value, Rician); the layout stream
    depends only on (seed, drop)."""
    rng = substream(experiment.seed, drop, STREAM_LAYOUT)
    return realize_network(
        experiment.system_config(),
        rng,
        drop_id=drop,
        assignment_basis=experiment.assignment_basis,
    )


def drop_cases(
    experiment: ExperimentConfig,
    base: NetworkRealization,
) -> Iterator[Tuple[str, int, NetworkRealization]]:
    """(fading, M, realization) for every case of one drop, sharing the base geometry."""
    for fading in experiment.fading:
        for antennas in experiment.sweep:
            yield fading, antennas, base.with_antennas(antennas).with_fading(fading == 'rayleigh')


def _map_drops(experiment: ExperimentConfig, work: Callable[[int], T], threads: int) -> List[T]:
    drops = range(experiment.drops)
    if threads <= 1 or experiment.drops == 1:
        return [work(drop) for drop in drops]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(work, drops))


def evaluate_drop(experiment: ExperimentConfig, drop: int) -> List[UeResult]:
    """Closed-form SE of every UE for every fading mode, antenna count and estimator."""
    base = realize_drop(experiment, drop)
    results: List[UeResult] = []
    for fading, antennas, realization in drop_cases(experiment, base):
        for estimator in experiment.estimators:
            breakdowns = evaluate_network(realization, estimator)
            mse, _ = estimation_mse(realization, estimator)
            for ue, breakdown in enumerate(breakdowns):
                cell, k = realization.ue_id(ue)
                results.append(UeResult(
                    drop=drop,
                    cell=cell,
                    ue=k,
                    serving_bs=int(realization.serving[ue]),
                    antennas=antennas,
                    estimator=estimator,
                    fading=fading,
                    sinr=float(breakdown.sinr),
                    se=float(breakdown.se),
                    mse=float(mse[ue]),
                ))
    logger.info("drop evaluated", drop=drop, cases=len(results))
    return results


def _evaluate_all(experiment: ExperimentConfig, threads: int) -> List[UeResult]:
    per_drop = _map_drops(experiment, lambda drop: evaluate_drop(experiment, drop), threads)
    results = [result for drop_results in per_drop for result in drop_results]
    if experiment.per_ue_output:
        write_csv(experiment.per_ue_output, PER_UE_COLUMNS, (r.as_row() for r in results))
    return results


def run_fig1(experiment: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """
    Average per-cell UL sum SE versus the number of BS antennas.

    For every (M, estimator, fading) the per-drop value is the network sum SE divided
    by L; the CSV reports its mean over drops and the standard error over drops.
    """
    results = _evaluate_all(experiment, threads)
    num_cells = experiment.system.num_cells
    if experiment.drops == 1:
        logger.warning("single drop, standard errors reported as 0")

    per_drop: Dict[Tuple[int, str, str], np.ndarray] = {}
    for r in results:
        key = (r.antennas, r.estimator, r.fading)
        per_drop.setdefault(key, np.zeros(experiment.drops))[r.drop] += r.se / num_cells

    rows = []
    for fading in experiment.fading:
        for estimator in experiment.estimators:
            for antennas in experiment.sweep:
                values = per_drop[(antennas, estimator, fading)]
                std_error = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
                rows.append({
                    'M': antennas,
                    'estimator': estimator,
                    'fading': fading,
                    'mean_sum_se': float(values.mean()),
                    'std_error': std_error,
                })
    output = write_csv(experiment.output, FIG1_COLUMNS, rows)
    curves = [(e, f) for f in experiment.fading for e in experiment.estimators]
    script = emit_plot_script(output, 'fig1', curves)
    return ExperimentResult(output=output, rows=rows, ue_results=results, reports=[], plot_script=script)


def empirical_cdf(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted samples and their ECDF levels (i + 1) / n."""
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    return ordered, np.arange(1, ordered.size + 1) / ordered.size


def run_fig2(experiment: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Empirical CDF of the per-UE SE, pooled over drops and cells."""
    results = _evaluate_all(experiment, threads)
    pooled: Dict[Tuple[str, str, int], List[float]] = {}
    for r in results:
        pooled.setdefault((r.estimator, r.fading, r.antennas), []).append(r.se)

    rows = []
    curves = []
    for estimator in experiment.estimators:
        for fading in experiment.fading:
            for antennas in experiment.sweep:
                se, cdf = empirical_cdf(np.array(pooled[(estimator, fading, antennas)]))
                curves.append((estimator, fading, antennas))
                rows.extend(
                    {'estimator': estimator, 'fading': fading, 'M': antennas, 'se': float(s), 'cdf': float(c)}
                    for s, c in zip(se, cdf)
                )
    output = write_csv(experiment.output, FIG2_COLUMNS, rows)
    script = emit_plot_script(output, 'fig2', curves)
    return ExperimentResult(output=output, rows=rows, ue_results=results, reports=[], plot_script=script)


def run_validate(experiment: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """
    Monte Carlo check of the closed forms for every drop, fading mode and antenna
    count. Threads parallelize the trial blocks inside each case.
    """
    mc_config = experiment.mc_config()
    reports: List[SeReport] = []
    for drop in range(experiment.drops):
        base = realize_drop(experiment, drop)
        for fading, antennas, realization in drop_cases(experiment, base):
            logger.info("validating", drop=drop, fading=fading, antennas=antennas)
            reports.extend(validate(realization, experiment.estimators, mc_config, threads))

    rows = [
        {
            'drop': r.drop,
            'fading': r.fading,
            'antennas': r.antennas,
            'estimator': r.estimator,
            'cell': r.cell,
            'ue': r.ue_in_cell,
            'serving_bs': r.serving_bs,
            'closed_sinr': r.closed_sinr,
            'mc_sinr': r.mc_sinr,
            'mc_std_error': r.mc_std_error,
            'rel_error': r.rel_error,
            'passed': r.passed,
            'within_target': r.within_target,
        }
        for r in reports
    ]
    output = write_csv(experiment.output, VALIDATE_COLUMNS, rows)
    failures = sum(not r.passed for r in reports)
    (logger.warning if failures else logger.info)(
        "validation run finished", reports=len(reports), failures=failures
    )
    return ExperimentResult(output=output, rows=rows, ue_results=[], reports=reports)
