"""
Large-scale propagation: unit conversions and the 3GPP-style path loss of the
LoS and NLoS components.
"""

from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..common.errors import InvalidArgumentError

FloatOrArray = Union[float, NDArray[np.float64]]

# beta = intercept + slope * log10(d) + shadow   [dB]
LOS_INTERCEPT_DB = -30.18
LOS_SLOPE_DB = -26.0
NLOS_INTERCEPT_DB = -34.53
NLOS_SLOPE_DB = -38.0


def _as_output(values: NDArray[np.float64]) -> FloatOrArray:
    return float(values) if values.ndim == 0 else values


def db_to_linear(x_db: ArrayLike) -> FloatOrArray:
    """Convert a power ratio from dB to linear scale, 10^(x/10)."""
    return _as_output(np.power(10.0, np.asarray(x_db, dtype=np.float64) / 10.0))


def dbm_to_mw(x_dbm: ArrayLike) -> FloatOrArray:
    """Convert a power from dBm to mW."""
    return db_to_linear(x_dbm)


def _path_loss(distance_m: ArrayLike, shadow_db: ArrayLike, intercept: float, slope: float) -> FloatOrArray:
    distance = np.asarray(distance_m, dtype=np.float64)
    if np.any(~(distance > 0)):
        raise InvalidArgumentError(f"distance must be positive, got {distance_m}")
    shadow = np.asarray(shadow_db, dtype=np.float64)
    return _as_output(intercept + slope * np.log10(distance) + shadow)


def pathloss_los(distance_m: ArrayLike, shadow_db: ArrayLike = 0.0) -> FloatOrArray:
    """
    Large-scale gain of the LoS component in dB.

    Args:
        distance_m: BS-UE distance in meters (> 0)
        shadow_db: Shadow fading realization in dB

    Returns:
        -30.18 - 26 log10(d) + shadow_db
    """
    return _path_loss(distance_m, shadow_db, LOS_INTERCEPT_DB, LOS_SLOPE_DB)


def pathloss_nlos(distance_m: ArrayLike, shadow_db: ArrayLike = 0.0) -> FloatOrArray:
    """Large-scale gain of the NLoS component in dB: -34.53 - 38 log10(d) + shadow_db."""
    return _path_loss(distance_m, shadow_db, NLOS_INTERCEPT_DB, NLOS_SLOPE_DB)
