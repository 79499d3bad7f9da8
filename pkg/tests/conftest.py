"""
Shared fixtures: the scalar single-UE cell with hand-computable moments, a small
pilot-contaminated network and a factory of random decoding contexts.
"""

from typing import Callable

import numpy as np
import pytest

from src.channel_model.data_structures import LinkBlock, LinkStats, SystemConfig
from src.estimation.serving_cell import ServingCell
from src.monte_carlo.rng import STREAM_LAYOUT, substream
from src.network.assignment import allocate_pilots
from src.network.realization import NetworkRealization, realize_network


@pytest.fixture
def scalar_config() -> SystemConfig:
    """M=1, K=1, L=1, tau_p=1, p=1, sigma^2=1."""
    return SystemConfig(
        num_antennas=1,
        ues_per_cell=1,
        num_cells=1,
        tau_c=2,
        tau_p=1,
        ul_power_mw=1.0,
        noise_power_mw=1.0,
    )


@pytest.fixture
def scalar_cell(scalar_config: SystemConfig) -> ServingCell:
    """Rayleigh link with beta=1: q = E|h_hat|^2 = 0.5 for MMSE."""
    link = LinkStats(
        mean=np.zeros(1, dtype=np.complex128),
        cov=np.eye(1, dtype=np.complex128),
        beta_los_db=0.0,
        beta_nlos_db=0.0,
        angle_rad=0.0,
    )
    return ServingCell.from_links([link], pilots=[0], config=scalar_config)


@pytest.fixture
def small_config() -> SystemConfig:
    """Four cells, two UEs each, full pilot reuse (tau_p = K)."""
    return SystemConfig(
        num_antennas=4,
        ues_per_cell=2,
        num_cells=4,
        tau_c=20,
        tau_p=2,
        ul_power_mw=10.0,
        noise_power_mw=10 ** -9.4,
    )


@pytest.fixture
def small_network(small_config: SystemConfig) -> NetworkRealization:
    return realize_network(small_config, substream(3, 0, STREAM_LAYOUT))


def make_random_block(rng: np.random.Generator, num_ues: int, num_antennas: int, rayleigh: bool = False) -> LinkBlock:
    """Random well-scaled link statistics (PSD covariances, unit-order means)."""
    rank = max(1, num_antennas // 2)
    g = (rng.standard_normal((num_ues, num_antennas, rank))
         + 1j * rng.standard_normal((num_ues, num_antennas, rank)))
    covs = g @ np.conj(np.swapaxes(g, -1, -2)) / (2 * rank)
    covs = 0.5 * (covs + np.conj(np.swapaxes(covs, -1, -2)))
    covs *= rng.uniform(0.1, 2.0, size=(num_ues, 1, 1))
    if rayleigh:
        means = np.zeros((num_ues, num_antennas), dtype=np.complex128)
    else:
        means = (rng.standard_normal((num_ues, num_antennas))
                 + 1j * rng.standard_normal((num_ues, num_antennas))) * rng.uniform(0.1, 1.5, size=(num_ues, 1))
    return LinkBlock(
        means=means,
        covs=covs,
        beta_los_db=np.zeros(num_ues),
        beta_nlos_db=np.zeros(num_ues),
        angles_rad=np.zeros(num_ues),
    )


@pytest.fixture
def random_cell() -> Callable[..., ServingCell]:
    """
    Factory: random_cell(rng, M, L, K, rayleigh=False) builds a decoding context with
    full pilot reuse across L cells of K UEs.
    """
    def build(rng: np.random.Generator, M: int, L: int, K: int, rayleigh: bool = False) -> ServingCell:
        config = SystemConfig(
            num_antennas=M,
            ues_per_cell=K,
            num_cells=L,
            tau_c=10 * K,
            tau_p=K,
            ul_power_mw=float(rng.uniform(0.5, 2.0)),
            noise_power_mw=float(rng.uniform(0.2, 1.0)),
        )
        block = make_random_block(rng, L * K, M, rayleigh=rayleigh)
        pilots = allocate_pilots(L, K, K, rng)
        powers = rng.uniform(0.5, 2.0, size=L * K)
        return ServingCell.from_links(block, pilots, config, powers=powers, bs=0)

    return build
