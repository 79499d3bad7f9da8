"""
Closed-form evaluation of every UE of a network realization.
"""

from typing import List, Union

import numpy as np
import structlog

from ..common.errors import InvalidArgumentError
from ..estimation.estimators import Estimator
from ..estimation.serving_cell import ServingCell, serving_cell
from ..network.realization import NetworkRealization
from .breakdown import SinrBreakdownLs, SinrBreakdownMmse
from .ls import sinr_ls
from .mmse import sinr_mmse

logger = structlog.get_logger(__name__)

SinrBreakdown = Union[SinrBreakdownMmse, SinrBreakdownLs]


def closed_form_sinr(cell: ServingCell, target: int, estimator: Estimator) -> SinrBreakdown:
    if estimator == 'mmse':
        return sinr_mmse(cell, target)
    if estimator == 'ls':
        return sinr_ls(cell, target)
    raise InvalidArgumentError(f"unknown estimator {estimator!r}")


def evaluate_network(realization: NetworkRealization, estimator: Estimator) -> List[SinrBreakdown]:
    """
    Closed-form SINR/SE breakdown of every UE at its serving BS.

    Returns:
        One breakdown per UE, in global UE order
    """
    results: List[SinrBreakdown] = [None] * realization.num_ues  # type: ignore[list-item]
    for bs in range(realization.config.num_cells):
        targets = realization.served_by(bs)
        if targets.size == 0:
            continue
        cell = serving_cell(realization, bs)
        for ue in targets:
            results[int(ue)] = closed_form_sinr(cell, int(ue), estimator)

    se = np.array([r.se for r in results])
    logger.debug(
        "network evaluated",
        drop=realization.drop_id,
        estimator=estimator,
        antennas=realization.config.num_antennas,
        rayleigh=realization.rayleigh,
        mean_se=float(se.mean()),
    )
    return results
