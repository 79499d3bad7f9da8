"""
Everything one BS needs to estimate and decode its UEs.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from ..channel_model.data_structures import LinkBlock, LinkStats, SystemConfig
from ..common.errors import InvalidArgumentError
from ..network.realization import NetworkRealization
from .estimators import EstimateStats, Estimator, estimate_stats
from .pilot_processing import PilotGroupStats, psi_matrix

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ServingCell:
    """
    Decoding context of BS `bs`: its links to every UE, the pilot map, the powers
    and one PilotGroupStats per pilot index in use.
    """
    bs: int
    block: LinkBlock
    pilots: NDArray[np.int64]
    powers: NDArray[np.float64]
    groups: Dict[int, PilotGroupStats]
    config: SystemConfig

    @property
    def num_ues(self) -> int:
        return self.block.shape[0]

    def link(self, ue: int) -> LinkStats:
        return self.block.link(ue)

    @cached_property
    def flat_covs(self) -> NDArray[np.complex128]:
        """(N, M*M) covariances; tr(R_n B) = flat_covs @ B.T.ravel()."""
        n, M = self.block.shape
        return self.block.covs.reshape(n, M * M)

    @cached_property
    def cov_traces(self) -> NDArray[np.float64]:
        return np.real(np.trace(self.block.covs, axis1=1, axis2=2))

    @cached_property
    def cov_norms(self) -> NDArray[np.float64]:
        """Frobenius norm of every covariance."""
        return np.linalg.norm(self.block.covs, axis=(1, 2))

    @cached_property
    def mean_norms2(self) -> NDArray[np.float64]:
        return np.sum(np.abs(self.block.means) ** 2, axis=1)

    def group_of(self, ue: int) -> PilotGroupStats:
        return self.groups[int(self.pilots[ue])]

    def copilot_mask(self, ue: int) -> NDArray[np.bool_]:
        return self.pilots == self.pilots[ue]

    def estimate_stats(self, estimator: Estimator, ue: int) -> EstimateStats:
        return estimate_stats(estimator, self.link(ue), self.group_of(ue), ue)

    def mse(self, estimator: Estimator, ue: int) -> float:
        return self.estimate_stats(estimator, ue).mse

    @classmethod
    def from_links(
        cls,
        links: Union[LinkBlock, Sequence[LinkStats]],
        pilots: ArrayLike,
        config: SystemConfig,
        powers: Optional[ArrayLike] = None,
        bs: int = 0,
    ) -> 'ServingCell':
        """
        Build the context from explicit link statistics.

        Args:
            links: Links from every UE to this BS, one row per global UE index
            pilots: Pilot index per UE
            config: System configuration (tau_p, sigma^2, default power)
            powers: Per-UE powers (config.p when omitted)
            bs: Label of the BS
        """
        block = links if isinstance(links, LinkBlock) else LinkBlock.from_links(list(links))
        n, _ = block.shape
        pilots = np.array(pilots, dtype=np.int64)
        powers = np.full(n, config.p) if powers is None else np.array(powers, dtype=np.float64)
        if pilots.shape != (n,) or powers.shape != (n,):
            raise InvalidArgumentError(f"pilots and powers must have length {n}")
        groups = {
            int(pilot): psi_matrix(block, config, members=np.flatnonzero(pilots == pilot), powers=powers)
            for pilot in np.unique(pilots)
        }
        pilots.setflags(write=False)
        powers.setflags(write=False)
        return cls(bs=bs, block=block, pilots=pilots, powers=powers, groups=groups, config=config)


def serving_cell(realization: NetworkRealization, bs: int) -> ServingCell:
    """Decoding context of BS `bs` in a realization."""
    return ServingCell.from_links(
        realization.links_at(bs),
        realization.pilots,
        realization.config,
        powers=realization.powers,
        bs=bs,
    )


def estimation_mse(
    realization: NetworkRealization,
    estimator: Estimator,
) -> Tuple[NDArray[np.float64], float]:
    """
    Per-UE estimation MSE at the serving BS and its network average.

    MMSE reports tr(C); LS reports tr(error covariance) + ||error mean||^2.
    """
    mse = np.empty(realization.num_ues)
    for bs in range(realization.config.num_cells):
        targets = realization.served_by(bs)
        if targets.size == 0:
            continue
        cell = serving_cell(realization, bs)
        for ue in targets:
            mse[ue] = cell.mse(estimator, int(ue))
    average = float(mse.mean())
    logger.debug("estimation mse", estimator=estimator, drop=realization.drop_id, mean=average)
    return mse, average
