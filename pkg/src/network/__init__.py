"""
Network Module

Wrap-around square-grid layout, UE drops, shadow fading, serving-BS assignment and
pilot allocation.
"""

from .assignment import allocate_pilots, assign_serving_bs, copilot_mask, copilot_set
from .dump import dump_network
from .layout import bs_grid, drop_ues, grid_side, world_size, wrap_displacement
from .realization import NetworkRealization, realize_network

__all__ = [
    'NetworkRealization',
    'realize_network',
    'bs_grid',
    'grid_side',
    'world_size',
    'wrap_displacement',
    'drop_ues',
    'assign_serving_bs',
    'allocate_pilots',
    'copilot_mask',
    'copilot_set',
    'dump_network',
]
