"""
One random realization of the multi-cell network ("drop").

Geometry, shadowing, serving map, pilots and large-scale gains are stored eagerly as
read-only arrays. Link statistics are materialized per BS on first use and cached.
"""

import hashlib
import threading
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Literal

import numpy as np
import structlog
from numpy.typing import NDArray

from ..channel_model.data_structures import LinkBlock, LinkStats, SystemConfig
from ..channel_model.link_builder import large_scale_gains_db, link_block_from_gains
from ..common.errors import InvalidArgumentError
from .assignment import UeId, allocate_pilots, assign_serving_bs, copilot_mask, copilot_set
from .layout import bs_grid, drop_ues, world_size, wrap_displacement

logger = structlog.get_logger(__name__)

AssignmentBasis = Literal['nlos', 'los']

_ARRAY_FIELDS = (
    'bs_positions', 'ue_positions', 'shadow', 'distances', 'angles',
    'beta_los_db', 'beta_nlos_db', 'serving', 'pilots', 'powers',
)


@dataclass(frozen=True, eq=False)
class NetworkRealization:
    """
    Attributes:
        config: System configuration
        drop_id: Index of this drop within an experiment
        bs_positions: (L, 2) BS coordinates in meters
        ue_positions: (N, 2) UE coordinates, N = L*K; UE u was dropped in cell u // K
        shadow: (L, N) standard-normal shadow variables
        distances: (L, N) wrap-around BS-UE distances
        angles: (L, N) direction of the wrap-minimizing displacement BS -> UE
        beta_los_db: (L, N) LoS gains in dB
        beta_nlos_db: (L, N) NLoS gains in dB
        serving: (N,) serving BS per UE
        pilots: (N,) pilot index per UE
        powers: (N,) UL transmit power per UE in mW
        rayleigh: LoS components blocked when True
    """
    config: SystemConfig
    drop_id: int
    bs_positions: NDArray[np.float64]
    ue_positions: NDArray[np.float64]
    shadow: NDArray[np.float64]
    distances: NDArray[np.float64]
    angles: NDArray[np.float64]
    beta_los_db: NDArray[np.float64]
    beta_nlos_db: NDArray[np.float64]
    serving: NDArray[np.int64]
    pilots: NDArray[np.int64]
    powers: NDArray[np.float64]
    rayleigh: bool = False
    _blocks: Dict[int, LinkBlock] = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name in _ARRAY_FIELDS:
            array = np.array(getattr(self, name), copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        L, N = self.config.num_cells, self.config.num_ues
        for name in ('shadow', 'distances', 'angles', 'beta_los_db', 'beta_nlos_db'):
            if getattr(self, name).shape != (L, N):
                raise InvalidArgumentError(
                    f"{name} has shape {getattr(self, name).shape}, expected {(L, N)}"
                )
        for name in ('serving', 'pilots', 'powers'):
            if getattr(self, name).shape != (N,):
                raise InvalidArgumentError(f"{name} must have length {N}")
        if np.any(self.pilots >= self.config.tau_p) or np.any(self.pilots < 0):
            raise InvalidArgumentError("pilot indices must lie in [0, tau_p)")
        if np.any(self.powers <= 0):
            raise InvalidArgumentError("UE powers must be positive")

    @property
    def num_ues(self) -> int:
        return self.config.num_ues

    def ue_id(self, ue: int) -> UeId:
        """(cell, ue-in-cell) of a global UE index."""
        K = self.config.ues_per_cell
        return ue // K, ue % K

    def links_at(self, bs: int) -> LinkBlock:
        """Statistics of the links from every UE to BS `bs` (built once, then cached)."""
        if not 0 <= bs < self.config.num_cells:
            raise InvalidArgumentError(f"BS index {bs} out of range")
        with self._lock:
            block = self._blocks.get(bs)
            if block is None:
                block = link_block_from_gains(
                    self.config,
                    self.beta_los_db[bs],
                    self.beta_nlos_db[bs],
                    self.angles[bs],
                    rayleigh=self.rayleigh,
                )
                self._blocks[bs] = block
        return block

    def link(self, bs: int, ue: int) -> LinkStats:
        return self.links_at(bs).link(ue)

    def served_by(self, bs: int) -> NDArray[np.int64]:
        """Global indices of the UEs served by `bs`, ascending."""
        return np.flatnonzero(self.serving == bs)

    def copilot_mask(self, ue: int) -> NDArray[np.bool_]:
        return copilot_mask(self.pilots, ue)

    def copilot_set(self, ue: int) -> FrozenSet[UeId]:
        return copilot_set(self.pilots, ue, self.config.ues_per_cell)

    def copilot_sets(self) -> List[FrozenSet[UeId]]:
        return [self.copilot_set(u) for u in range(self.num_ues)]

    def with_antennas(self, num_antennas: int) -> 'NetworkRealization':
        """Same drop seen by BSs with a different number of antennas."""
        return replace(self, config=self.config.with_antennas(num_antennas))

    def with_fading(self, rayleigh: bool) -> 'NetworkRealization':
        """Same drop with LoS components blocked (True) or present (False)."""
        return replace(self, rayleigh=rayleigh)

    def geometry_digest(self, include_means: bool = False) -> str:
        """
        SHA-256 over geometry, shadowing, assignment, pilots, powers and the link
        covariances. Rician and Rayleigh views of one drop share this digest unless
        `include_means` adds the LoS vectors.
        """
        digest = hashlib.sha256()
        digest.update(self.config.model_dump_json().encode('utf-8'))
        for name in _ARRAY_FIELDS:
            digest.update(np.ascontiguousarray(getattr(self, name)).tobytes())
        for bs in range(self.config.num_cells):
            block = self.links_at(bs)
            digest.update(np.ascontiguousarray(block.covs).tobytes())
            if include_means:
                digest.update(np.ascontiguousarray(block.means).tobytes())
        return digest.hexdigest()


def realize_network(
    config: SystemConfig,
    rng: np.random.Generator,
    drop_id: int = 0,
    assignment_basis: AssignmentBasis = 'nlos',
    rayleigh: bool = False,
) -> NetworkRealization:
    """
    Draw UE positions, shadow fading and pilots, then assign serving BSs.

    Random numbers are consumed in the order positions, shadowing, pilots.

    Args:
        config: System configuration (L must be a perfect square)
        rng: Generator owning this drop's randomness
        drop_id: Label carried by the realization
        assignment_basis: Gain table driving the serving-BS choice
        rayleigh: Block the LoS components
    """
    if assignment_basis not in ('nlos', 'los'):
        raise InvalidArgumentError(f"unknown assignment basis {assignment_basis!r}")
    bs = bs_grid(config)
    ues = drop_ues(config, rng)
    distances, angles = wrap_displacement(bs[:, np.newaxis, :], ues[np.newaxis, :, :], world_size(config))
    shadow = rng.standard_normal(distances.shape)
    beta_los, beta_nlos = large_scale_gains_db(config, distances, shadow)
    serving = assign_serving_bs(beta_nlos if assignment_basis == 'nlos' else beta_los)
    pilots = allocate_pilots(config.num_cells, config.ues_per_cell, config.tau_p, rng)

    realization = NetworkRealization(
        config=config,
        drop_id=drop_id,
        bs_positions=bs,
        ue_positions=ues,
        shadow=shadow,
        distances=distances,
        angles=angles,
        beta_los_db=beta_los,
        beta_nlos_db=beta_nlos,
        serving=serving,
        pilots=pilots,
        powers=np.full(config.num_ues, config.ul_power_mw),
        rayleigh=rayleigh,
    )
    drop_cell = np.arange(config.num_ues) // config.ues_per_cell
    logger.debug(
        "network realized",
        drop=drop_id,
        num_cells=config.num_cells,
        num_ues=config.num_ues,
        handovers=int(np.count_nonzero(serving != drop_cell)),
    )
    return realization
