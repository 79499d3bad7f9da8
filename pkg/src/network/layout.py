"""
Square-grid cellular layout with wrap-around distances.
"""

import math
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..channel_model.data_structures import SystemConfig
from ..common.errors import ConfigurationError

# Shift order of the 9 wrap-around copies; the first component is the outer loop
_OFFSETS = np.array([(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)], dtype=np.float64)


def grid_side(num_cells: int) -> int:
    """Number of cells along one side of the square grid."""
    side = math.isqrt(num_cells)
    if side * side != num_cells:
        raise ConfigurationError(f"num_cells must be a perfect square, got {num_cells}")
    return side


def world_size(config: SystemConfig) -> float:
    return grid_side(config.num_cells) * config.cell_side_m


def bs_grid(config: SystemConfig) -> NDArray[np.float64]:
    """
    BS positions at the cell centers, shape (L, 2).

    BS j sits in row j // side and column j % side, at
    (side_m/2 + side_m*col, side_m/2 + side_m*row).
    """
    side = grid_side(config.num_cells)
    cells = np.arange(config.num_cells)
    col = cells % side
    row = cells // side
    half = config.cell_side_m / 2.0
    return np.column_stack([half + config.cell_side_m * col, half + config.cell_side_m * row])


def wrap_displacement(
    a: ArrayLike,
    b: ArrayLike,
    world: float,
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Shortest displacement from a to b on the torus of side `world`.

    Both inputs broadcast over leading axes (last axis = x, y). The minimum over the
    9 shifted copies of b is taken; ties go to the first copy in shift order.

    Returns:
        (distance, direction) where direction is the angle of the minimizing
        displacement b' - a
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    shifted = b[..., np.newaxis, :] + world * _OFFSETS
    delta = shifted - a[..., np.newaxis, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    best = np.argmin(dist, axis=-1)[..., np.newaxis]
    d = np.take_along_axis(dist, best, axis=-1)[..., 0]
    dx = np.take_along_axis(delta[..., 0], best, axis=-1)[..., 0]
    dy = np.take_along_axis(delta[..., 1], best, axis=-1)[..., 0]
    return d, np.arctan2(dy, dx)


def drop_ues(config: SystemConfig, rng: np.random.Generator) -> NDArray[np.float64]:
    """
    Drop K UEs uniformly in each cell, at least `min_distance_m` from the cell's BS.

    Returns:
        (L*K, 2) positions; UE u belongs to cell u // K
    """
    bs = bs_grid(config)
    world = world_size(config)
    half = config.cell_side_m / 2.0
    K = config.ues_per_cell
    positions = np.empty((config.num_cells * K, 2))
    for cell in range(config.num_cells):
        accepted = 0
        while accepted < K:
            candidate = bs[cell] + rng.uniform(-half, half, size=2)
            distance, _ = wrap_displacement(bs[cell], candidate, world)
            if distance >= config.min_distance_m:
                positions[cell * K + accepted] = candidate
                accepted += 1
    return positions
