"""
Serving-BS assignment, random pilot allocation and copilot sets.
"""

from typing import FrozenSet, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..common.errors import ConfigurationError, InvalidArgumentError

UeId = Tuple[int, int]


def assign_serving_bs(beta_db: ArrayLike) -> NDArray[np.int64]:
    """
    Serve every UE from the BS with the largest large-scale gain.

    Args:
        beta_db: (L, N) shadow-inclusive gains, one row per BS

    Returns:
        (N,) BS index per UE; ties go to the lowest BS index
    """
    table = np.asarray(beta_db, dtype=np.float64)
    if table.ndim != 2:
        raise InvalidArgumentError(f"beta_db must be (L, N), got shape {table.shape}")
    return np.argmax(table, axis=0).astype(np.int64)


def allocate_pilots(
    num_cells: int,
    ues_per_cell: int,
    tau_p: int,
    rng: np.random.Generator,
) -> NDArray[np.int64]:
    """
    Draw, independently per cell, distinct random pilot indices for its UEs.

    Returns:
        (L*K,) pilot index per UE in {0, ..., tau_p - 1}
    """
    if ues_per_cell > tau_p:
        raise ConfigurationError(
            f"cannot give {ues_per_cell} UEs distinct pilots out of tau_p={tau_p}"
        )
    pilots = np.empty(num_cells * ues_per_cell, dtype=np.int64)
    for cell in range(num_cells):
        start = cell * ues_per_cell
        pilots[start:start + ues_per_cell] = rng.choice(tau_p, size=ues_per_cell, replace=False)
    return pilots


def copilot_mask(pilots: ArrayLike, ue: int) -> NDArray[np.bool_]:
    """Boolean mask of all UEs (the UE itself included) sharing the pilot of `ue`."""
    pilots = np.asarray(pilots)
    if not 0 <= ue < pilots.size:
        raise InvalidArgumentError(f"UE index {ue} out of range [0, {pilots.size})")
    return pilots == pilots[ue]


def copilot_set(pilots: ArrayLike, ue: int, ues_per_cell: int) -> FrozenSet[UeId]:
    """Copilot set of `ue` as (cell, ue-in-cell) pairs, the UE itself included."""
    members = np.flatnonzero(copilot_mask(pilots, ue))
    return frozenset((int(u) // ues_per_cell, int(u) % ues_per_cell) for u in members)
