"""
Monte Carlo SINR and its comparison against the closed forms.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from ..channel_model.data_structures import SystemConfig
from ..estimation.estimators import Estimator
from ..network.realization import NetworkRealization
from ..se_closed_form.breakdown import se_from_sinr
from ..se_closed_form.network_eval import SinrBreakdown, evaluate_network
from .config import McConfig
from .engine import McMoments, accumulate_moments

logger = structlog.get_logger(__name__)

# Below this many trials the propagated standard error is only indicative
MIN_RELIABLE_TRIALS = 1000


def mc_sinr(moments: McMoments, config: SystemConfig) -> Tuple[float, float]:
    """
    SINR from sampled moments, with a delta-method standard error.

    gamma = p|a|^2 / (s - p|a|^2 + sigma^2 w) with a = E{v^H h}, s = E{sum p_n |v^H h_n|^2}
    and w = E{||v||^2}. The error propagates the joint trial covariance of
    (Re a, Im a, s, w).

    Returns:
        (sinr, standard error); zero signal gives (0, 0)
    """
    p = moments.target_power
    sigma2 = config.sigma2_ul
    a = moments.mean_vh
    signal = p * abs(a) ** 2
    if signal == 0.0:
        return 0.0, 0.0
    total = moments.weighted_second + sigma2 * moments.norm2
    denominator = total - signal
    sinr = signal / denominator

    if moments.num_trials == 0:
        return sinr, 0.0
    if moments.num_trials < 2:
        return sinr, math.inf
    scale = 1.0 / denominator ** 2
    gradient = np.array([
        2.0 * p * a.real * total * scale,
        2.0 * p * a.imag * total * scale,
        -signal * scale,
        -signal * sigma2 * scale,
    ])
    variance = float(gradient @ moments.trial_cov @ gradient) / moments.num_trials
    return sinr, math.sqrt(max(variance, 0.0))


@dataclass(frozen=True)
class SeReport:
    """
    One UE's closed-form versus Monte Carlo comparison.

    `breakdown` keeps the closed-form interference terms behind closed_sinr
    (xi, gamma_coh, nu for MMSE; eta, mu, chi for LS).
    """
    drop: int
    fading: str
    antennas: int
    estimator: Estimator
    ue: int
    cell: int
    ue_in_cell: int
    serving_bs: int
    closed_sinr: float
    closed_se: float
    mc_sinr: float
    mc_std_error: float
    mc_se: float
    rel_error: float
    passed: bool
    within_target: bool
    breakdown: SinrBreakdown = field(compare=False, repr=False)


def _relative_error(measured: float, reference: float) -> float:
    if reference == 0.0:
        return abs(measured)
    return abs(measured - reference) / reference


def validate(
    realization: NetworkRealization,
    estimators: Union[Estimator, Sequence[Estimator]],
    mc_config: McConfig,
    threads: int = 1,
) -> List[SeReport]:
    """
    Compare the closed-form SINR of every UE with its Monte Carlo estimate.

    When several estimators are given they are evaluated on the same channel draws.

    Returns:
        Reports ordered by estimator, then UE
    """
    estimator_list: List[Estimator] = [estimators] if isinstance(estimators, str) else list(estimators)
    config = realization.config
    if mc_config.n_realizations < MIN_RELIABLE_TRIALS:
        logger.warning(
            "few monte carlo trials, error bars are unreliable",
            trials=mc_config.n_realizations,
            recommended=MIN_RELIABLE_TRIALS,
        )

    closed = {estimator: evaluate_network(realization, estimator) for estimator in estimator_list}
    targets = {bs: realization.served_by(bs) for bs in range(config.num_cells)}
    merged = accumulate_moments(realization, targets, estimator_list, mc_config, threads)

    fading = 'rayleigh' if realization.rayleigh else 'rician'
    reports: List[SeReport] = []
    for estimator in estimator_list:
        for ue in range(realization.num_ues):
            bs = int(realization.serving[ue])
            moments = McMoments.from_accumulator(
                merged[bs][(estimator, ue)], ue, bs, estimator, realization.powers
            )
            sinr, std_error = mc_sinr(moments, config)
            reference = closed[estimator][ue].sinr
            cell, k = realization.ue_id(ue)
            reports.append(SeReport(
                drop=realization.drop_id,
                fading=fading,
                antennas=config.num_antennas,
                estimator=estimator,
                ue=ue,
                cell=cell,
                ue_in_cell=k,
                serving_bs=bs,
                closed_sinr=reference,
                closed_se=closed[estimator][ue].se,
                mc_sinr=sinr,
                mc_std_error=std_error,
                mc_se=se_from_sinr(sinr, config),
                rel_error=_relative_error(sinr, reference),
                passed=abs(sinr - reference) <= mc_config.sigma_factor * std_error,
                within_target=_relative_error(sinr, reference) <= mc_config.relative_target,
                breakdown=closed[estimator][ue],
            ))

    failures = sum(not r.passed for r in reports)
    log = logger.warning if failures else logger.info
    log(
        "validation finished",
        drop=realization.drop_id,
        fading=fading,
        antennas=config.num_antennas,
        reports=len(reports),
        failures=failures,
    )
    return reports


def summarize(reports: Sequence[SeReport]) -> Optional[float]:
    """Largest relative SINR error of a set of reports (None when empty)."""
    if not reports:
        return None
    return max(r.rel_error for r in reports)
