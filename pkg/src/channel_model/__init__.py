"""
Channel Model Module

Correlated Rician fading: path loss, ULA array response, local scattering
correlation, and per-link statistics.
"""

from .array_response import local_scattering_cov, ula_steering
from .data_structures import LinkBlock, LinkStats, SystemConfig
from .link_builder import (
    build_link_block,
    build_link_stats,
    large_scale_gains_db,
    link_block_from_gains,
)
from .propagation import db_to_linear, dbm_to_mw, pathloss_los, pathloss_nlos

__all__ = [
    'SystemConfig',
    'LinkStats',
    'LinkBlock',
    'ula_steering',
    'local_scattering_cov',
    'db_to_linear',
    'dbm_to_mw',
    'pathloss_los',
    'pathloss_nlos',
    'large_scale_gains_db',
    'link_block_from_gains',
    'build_link_block',
    'build_link_stats',
]
