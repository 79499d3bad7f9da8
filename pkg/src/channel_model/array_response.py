"""
Uniform linear array response and the local scattering correlation model.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..common.errors import InvalidArgumentError

# Half-wavelength antenna spacing
ANTENNA_SPACING = 0.5


def _check_antennas(num_antennas: int) -> None:
    if int(num_antennas) != num_antennas or num_antennas < 1:
        raise InvalidArgumentError(f"num_antennas must be a positive integer, got {num_antennas}")


def ula_steering(angle_rad: ArrayLike, num_antennas: int) -> NDArray[np.complex128]:
    """
    Steering vector of a half-wavelength ULA.

    Element m is exp(2j*pi*d*m*sin(angle)) with d = 1/2. For an array of angles the
    result has shape angle.shape + (M,).
    """
    _check_antennas(num_antennas)
    angle = np.asarray(angle_rad, dtype=np.float64)
    m = np.arange(num_antennas)
    phase = 2.0 * np.pi * ANTENNA_SPACING * np.sin(angle)[..., np.newaxis] * m
    return np.exp(1j * phase)


def local_scattering_cov(
    beta_linear: ArrayLike,
    angle_rad: ArrayLike,
    asd_rad: float,
    num_antennas: int,
) -> NDArray[np.complex128]:
    """
    Spatial correlation of a ULA under Gaussian local scattering.

    [R]_{l,m} = beta * exp(2j*pi*d*(l-m)*sin(phi))
                     * exp(-(sigma^2/2) * (2*pi*d*(l-m)*cos(phi))^2)

    Args:
        beta_linear: NLoS gain (linear), scalar or array
        angle_rad: Nominal angle, broadcastable with beta_linear
        asd_rad: Angular standard deviation in radians (0 gives a rank-one matrix)
        num_antennas: M

    Returns:
        Hermitian PSD matrices of shape broadcast(beta, angle).shape + (M, M) whose
        diagonal equals beta
    """
    _check_antennas(num_antennas)
    if asd_rad < 0:
        raise InvalidArgumentError(f"asd_rad must be non-negative, got {asd_rad}")
    beta, angle = np.broadcast_arrays(
        np.asarray(beta_linear, dtype=np.float64), np.asarray(angle_rad, dtype=np.float64)
    )
    if np.any(beta < 0):
        raise InvalidArgumentError("beta_linear must be non-negative")

    m = np.arange(num_antennas)
    lag = (m[:, np.newaxis] - m[np.newaxis, :]).astype(np.float64)
    sin = np.sin(angle)[..., np.newaxis, np.newaxis]
    cos = np.cos(angle)[..., np.newaxis, np.newaxis]
    scale = 2.0 * np.pi * ANTENNA_SPACING * lag
    phase = np.exp(1j * scale * sin)
    damping = np.exp(-0.5 * asd_rad ** 2 * (scale * cos) ** 2)
    cov = beta[..., np.newaxis, np.newaxis] * phase * damping
    # exact Hermitian symmetry
    return 0.5 * (cov + np.conj(np.swapaxes(cov, -1, -2)))
