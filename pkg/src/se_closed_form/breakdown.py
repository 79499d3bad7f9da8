"""
Term-by-term results of the closed-form SINR evaluation.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..channel_model.data_structures import SystemConfig
from ..common.errors import InvalidArgumentError


def se_from_sinr(sinr: float, config: SystemConfig) -> float:
    """Spectral efficiency (tau_u / tau_c) * log2(1 + sinr) in bit/s/Hz."""
    if not sinr >= 0:
        raise InvalidArgumentError(f"sinr must be non-negative, got {sinr}")
    return config.prelog * math.log2(1.0 + sinr)


@dataclass(frozen=True, eq=False)
class SinrBreakdownMmse:
    """
    MR combining with MMSE estimates, normalized by E{v^H h} of the target.

    Attributes:
        ue: Global index of the target UE
        bs: Serving BS
        signal: p * (p tau_p tr(R Psi R) + ||h_bar||^2)
        xi: (N,) non-coherent interference term of every UE
        gamma_coh: (N,) coherent interference term, zero outside the copilot
            set and for the target itself
        nu: ||h_bar||^4 / E{v^H h}, subtracted once from the denominator
        noise: sigma^2
        sinr: Effective SINR
        sinr_raw: SINR assembled from the unnormalized moments
        se: Spectral efficiency in bit/s/Hz
    """
    ue: int
    bs: int
    signal: float
    xi: NDArray[np.float64]
    gamma_coh: NDArray[np.float64]
    nu: float
    noise: float
    sinr: float
    sinr_raw: float
    se: float


@dataclass(frozen=True, eq=False)
class SinrBreakdownLs:
    """
    MR combining with LS estimates v = y / (sqrt(p) tau_p).

    Attributes:
        ue: Global index of the target UE
        bs: Serving BS
        eta: E{v^H h} (complex)
        mu: E{||v||^2}
        chi: (N,) E{|v^H h_n|^2} for every UE n
        noise: sigma^2
        sinr: Effective SINR
        sinr_raw: SINR assembled from the moments of the unscaled pilot signal
        se: Spectral efficiency in bit/s/Hz
    """
    ue: int
    bs: int
    eta: complex
    mu: float
    chi: NDArray[np.float64]
    noise: float
    sinr: float
    sinr_raw: float
    se: float
