"""
Block-wise Monte Carlo estimation of the moments that enter the UL SINR bound.

For one BS, every trial block draws the channels of all UEs and one effective noise
vector per pilot group, forms the processed pilots and then, for every requested
(estimator, target) pair, the MR combiner v. All targets of the BS and both
estimators share the same draws.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import structlog
from numpy.typing import NDArray

from ..common.errors import InvalidArgumentError
from ..estimation.estimators import ESTIMATORS, Estimator
from ..estimation.serving_cell import ServingCell, serving_cell
from ..network.realization import NetworkRealization
from .accumulator import MomentAccumulator
from .config import McConfig
from .rng import STREAM_CHANNELS, substream
from .sampling import cn_factor, standard_cn

logger = structlog.get_logger(__name__)

# Feature columns of one trial
FEATURE_RE_SIGNAL = 0
FEATURE_IM_SIGNAL = 1
FEATURE_INTERFERENCE = 2
FEATURE_NORM = 3
FEATURE_SECOND = 4

AccumulatorKey = Tuple[Estimator, int]


@dataclass(frozen=True, eq=False)
class McMoments:
    """
    Sample moments of the MR combiner v of one UE.

    Attributes:
        ue: Target UE
        bs: Serving BS
        estimator: Channel estimator behind v
        num_trials: Trials accumulated (0 for exact moments)
        mean_vh: E{v^H h} of the target
        mean_vh_se: Standard error of mean_vh (modulus)
        second_moments: (N,) E{|v^H h_n|^2}
        second_moments_se: (N,) standard errors
        norm2: E{||v||^2}
        norm2_se: Standard error of norm2
        weighted_second: E{sum_n p_n |v^H h_n|^2}
        target_power: p of the target
        powers: (N,) UE powers
        trial_cov: (4, 4) per-trial covariance of
            (Re v^H h, Im v^H h, sum_n p_n |v^H h_n|^2, ||v||^2)
    """
    ue: int
    bs: int
    estimator: Estimator
    num_trials: int
    mean_vh: complex
    mean_vh_se: float
    second_moments: NDArray[np.float64]
    second_moments_se: NDArray[np.float64]
    norm2: float
    norm2_se: float
    weighted_second: float
    target_power: float
    powers: NDArray[np.float64]
    trial_cov: NDArray[np.float64]

    @classmethod
    def from_accumulator(
        cls,
        acc: MomentAccumulator,
        ue: int,
        bs: int,
        estimator: Estimator,
        powers: NDArray[np.float64],
    ) -> 'McMoments':
        se = acc.standard_error()
        return cls(
            ue=ue,
            bs=bs,
            estimator=estimator,
            num_trials=acc.count,
            mean_vh=complex(acc.mean[FEATURE_RE_SIGNAL], acc.mean[FEATURE_IM_SIGNAL]),
            mean_vh_se=float(np.hypot(se[FEATURE_RE_SIGNAL], se[FEATURE_IM_SIGNAL])),
            second_moments=acc.mean[FEATURE_SECOND:].copy(),
            second_moments_se=se[FEATURE_SECOND:].copy(),
            norm2=float(acc.mean[FEATURE_NORM]),
            norm2_se=float(se[FEATURE_NORM]),
            weighted_second=float(acc.mean[FEATURE_INTERFERENCE]),
            target_power=float(powers[ue]),
            powers=np.asarray(powers, dtype=np.float64),
            trial_cov=acc.core_covariance(),
        )

    @classmethod
    def from_exact(
        cls,
        ue: int,
        bs: int,
        estimator: Estimator,
        mean_vh: complex,
        second_moments: NDArray[np.float64],
        norm2: float,
        powers: NDArray[np.float64],
    ) -> 'McMoments':
        """Moments known exactly (no sampling error), e.g. from the closed forms."""
        second = np.asarray(second_moments, dtype=np.float64)
        powers = np.asarray(powers, dtype=np.float64)
        return cls(
            ue=ue,
            bs=bs,
            estimator=estimator,
            num_trials=0,
            mean_vh=complex(mean_vh),
            mean_vh_se=0.0,
            second_moments=second,
            second_moments_se=np.zeros_like(second),
            norm2=float(norm2),
            norm2_se=0.0,
            weighted_second=float(powers @ second),
            target_power=float(powers[ue]),
            powers=powers,
            trial_cov=np.zeros((4, 4)),
        )


@dataclass(frozen=True, eq=False)
class _TargetPlan:
    ue: int
    group_index: int
    power: float
    mean: NDArray[np.complex128]
    y_bar: NDArray[np.complex128]
    gain: NDArray[np.complex128]


@dataclass(frozen=True, eq=False)
class _BsPlan:
    """Per-BS quantities computed once, before the parallel phase."""
    bs: int
    cell: ServingCell
    factors: NDArray[np.complex128]
    pilot_weights: NDArray[np.float64]
    targets: List[_TargetPlan]
    estimators: Tuple[Estimator, ...]


def _plan_bs(cell: ServingCell, targets: Iterable[int], estimators: Sequence[Estimator]) -> _BsPlan:
    tau_p = cell.config.tau_p
    used_pilots = sorted(cell.groups)
    weights = np.zeros((len(used_pilots), cell.num_ues))
    for g, pilot in enumerate(used_pilots):
        group = cell.groups[pilot]
        weights[g, group.members] = np.sqrt(group.powers) * tau_p

    plans = []
    for ue in targets:
        ue = int(ue)
        group = cell.group_of(ue)
        power = float(cell.powers[ue])
        # sqrt(p) R Psi = sqrt(p) (Psi R)^H
        gain = np.sqrt(power) * group.apply_psi(cell.block.covs[ue]).conj().T
        plans.append(_TargetPlan(
            ue=ue,
            group_index=used_pilots.index(int(cell.pilots[ue])),
            power=power,
            mean=cell.block.means[ue],
            y_bar=group.y_bar,
            gain=gain,
        ))
    return _BsPlan(
        bs=cell.bs,
        cell=cell,
        factors=cn_factor(cell.block.covs),
        pilot_weights=weights,
        targets=plans,
        estimators=tuple(estimators),
    )


def _run_block(
    plan: _BsPlan,
    seed: int,
    drop: int,
    block_index: int,
    trials: int,
) -> Dict[AccumulatorKey, MomentAccumulator]:
    cell = plan.cell
    config = cell.config
    N, M = cell.block.shape
    rng = substream(seed, drop, STREAM_CHANNELS, plan.bs, block_index)

    z = standard_cn(rng, (trials, N, M))
    h = cell.block.means + np.einsum('nmk,bnk->bnm', plan.factors, z)
    noise = np.sqrt(config.tau_p * config.sigma2_ul) * standard_cn(rng, (trials, plan.pilot_weights.shape[0], M))
    y = np.einsum('gn,bnm->bgm', plan.pilot_weights, h) + noise

    powers = cell.powers
    out: Dict[AccumulatorKey, MomentAccumulator] = {}
    for target in plan.targets:
        y_t = y[:, target.group_index]
        for estimator in plan.estimators:
            if estimator == 'mmse':
                v = target.mean + (y_t - target.y_bar) @ target.gain.T
            else:
                v = y_t / (np.sqrt(target.power) * config.tau_p)
            vh = np.einsum('bm,bnm->bn', v.conj(), h)
            second = np.abs(vh) ** 2
            signal = vh[:, target.ue]
            features = np.column_stack([
                signal.real,
                signal.imag,
                second @ powers,
                np.sum(np.abs(v) ** 2, axis=1),
                second,
            ])
            out[(estimator, target.ue)] = MomentAccumulator.from_samples(features)
    return out


def accumulate_moments(
    realization: NetworkRealization,
    targets_by_bs: Dict[int, Sequence[int]],
    estimators: Sequence[Estimator],
    mc_config: McConfig,
    threads: int = 1,
) -> Dict[int, Dict[AccumulatorKey, MomentAccumulator]]:
    """
    Run every trial block of every requested BS and merge the moments in block order.

    Args:
        realization: Network drop (its drop_id is part of the substream key)
        targets_by_bs: Target UEs per BS
        estimators: Combiners to evaluate on the shared draws
        mc_config: Trial count, seed and block sizing
        threads: Worker threads (affects speed only)

    Returns:
        {bs: {(estimator, ue): merged accumulator}}
    """
    for estimator in estimators:
        if estimator not in ESTIMATORS:
            raise InvalidArgumentError(f"unknown estimator {estimator!r}")
    if threads < 1:
        raise InvalidArgumentError(f"threads must be >= 1, got {threads}")

    config = realization.config
    blocks = mc_config.blocks(config.num_ues, config.num_antennas)
    plans = {
        bs: _plan_bs(serving_cell(realization, bs), targets, estimators)
        for bs, targets in sorted(targets_by_bs.items())
        if len(targets) > 0
    }
    logger.debug(
        "monte carlo started",
        drop=realization.drop_id,
        bss=len(plans),
        trials=mc_config.n_realizations,
        blocks=len(blocks),
        threads=threads,
    )

    tasks = [(bs, index, size) for bs in plans for index, size in enumerate(blocks)]
    def run(task: Tuple[int, int, int]) -> Dict[AccumulatorKey, MomentAccumulator]:
        bs, index, size = task
        return _run_block(plans[bs], mc_config.seed, realization.drop_id, index, size)

    if threads == 1:
        partials = [run(task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            partials = list(executor.map(run, tasks))

    merged: Dict[int, Dict[AccumulatorKey, MomentAccumulator]] = {bs: {} for bs in plans}
    for (bs, _, _), partial in zip(tasks, partials):
        for key, acc in partial.items():
            previous = merged[bs].get(key)
            merged[bs][key] = acc if previous is None else previous.merge(acc)
    return merged


def mc_moments(
    target: int,
    estimator: Estimator,
    realization: NetworkRealization,
    mc_config: McConfig,
    threads: int = 1,
) -> McMoments:
    """
    Sample moments of the MR combiner of `target` at its serving BS.

    Uses the same substreams as a network-wide validation of the same drop, so the
    result matches the corresponding validation row exactly.
    """
    if not 0 <= target < realization.num_ues:
        raise InvalidArgumentError(f"target UE {target} out of range")
    bs = int(realization.serving[target])
    merged = accumulate_moments(realization, {bs: [target]}, [estimator], mc_config, threads)
    return McMoments.from_accumulator(
        merged[bs][(estimator, target)], target, bs, estimator, realization.powers
    )
