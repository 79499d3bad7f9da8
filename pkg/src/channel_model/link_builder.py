"""
Assembly of LinkStats / LinkBlock from geometry and shadow fading.
"""

from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from ..common.errors import InvalidArgumentError
from .array_response import local_scattering_cov, ula_steering
from .data_structures import LinkBlock, LinkStats, SystemConfig
from .propagation import db_to_linear, pathloss_los, pathloss_nlos


def large_scale_gains_db(
    config: SystemConfig,
    distances_m: ArrayLike,
    shadow: ArrayLike,
) -> "tuple[np.ndarray, np.ndarray]":
    """
    LoS and NLoS gains in dB for standard-normal shadow variables.

    One shadow variable per link drives both components, scaled by the LoS and NLoS
    standard deviations respectively.
    """
    z = np.asarray(shadow, dtype=np.float64)
    beta_los = np.asarray(pathloss_los(distances_m, config.shadow_std_los_db * z))
    beta_nlos = np.asarray(pathloss_nlos(distances_m, config.shadow_std_nlos_db * z))
    return beta_los, beta_nlos


def link_block_from_gains(
    config: SystemConfig,
    beta_los_db: ArrayLike,
    beta_nlos_db: ArrayLike,
    angles_rad: ArrayLike,
    rayleigh: bool = False,
) -> LinkBlock:
    """Build a LinkBlock from precomputed dB gains and angles (one row per link)."""
    los = np.atleast_1d(np.asarray(beta_los_db, dtype=np.float64))
    nlos = np.atleast_1d(np.asarray(beta_nlos_db, dtype=np.float64))
    angles = np.atleast_1d(np.asarray(angles_rad, dtype=np.float64))
    if not (los.shape == nlos.shape == angles.shape) or los.ndim != 1:
        raise InvalidArgumentError(
            f"gain/angle shapes differ: {los.shape}, {nlos.shape}, {angles.shape}"
        )
    if not np.all(np.isfinite(angles)):
        raise InvalidArgumentError("angles must be finite")

    M = config.num_antennas
    covs = local_scattering_cov(db_to_linear(nlos), angles, config.asd_rad, M)
    if rayleigh:
        means = np.zeros((angles.size, M), dtype=np.complex128)
    else:
        amplitude = np.sqrt(np.atleast_1d(db_to_linear(los)))
        means = amplitude[:, np.newaxis] * ula_steering(angles, M)
    return LinkBlock(
        means=means,
        covs=covs,
        beta_los_db=los,
        beta_nlos_db=nlos,
        angles_rad=angles,
    )


def build_link_block(
    config: SystemConfig,
    distances_m: ArrayLike,
    angles_rad: ArrayLike,
    shadow: Optional[ArrayLike] = None,
    rayleigh: bool = False,
) -> LinkBlock:
    """
    Build the statistics of several links in one vectorized pass.

    Args:
        config: System configuration (M, ASD, shadow standard deviations)
        distances_m: (N,) BS-UE distances in meters
        angles_rad: (N,) nominal angles
        shadow: (N,) standard-normal shadow variables (zero when omitted)
        rayleigh: Zero the LoS means while keeping the covariances

    Returns:
        LinkBlock with one row per link
    """
    distances = np.atleast_1d(np.asarray(distances_m, dtype=np.float64))
    z = np.zeros_like(distances) if shadow is None else np.atleast_1d(np.asarray(shadow, dtype=np.float64))
    beta_los, beta_nlos = large_scale_gains_db(config, distances, z)
    return link_block_from_gains(config, beta_los, beta_nlos, angles_rad, rayleigh=rayleigh)


def build_link_stats(
    config: SystemConfig,
    distance_m: float,
    angle_rad: float,
    shadow: float = 0.0,
    rayleigh: bool = False,
) -> LinkStats:
    """Statistics of a single BS-UE link."""
    return build_link_block(config, [distance_m], [angle_rad], [shadow], rayleigh=rayleigh).link(0)
