"""
MMSE and LS channel estimators and the exact statistics of their outputs.
"""

from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..channel_model.data_structures import LinkStats
from ..common.errors import InvalidArgumentError
from ..common.numerics import real_part
from .pilot_processing import PilotGroupStats

Estimator = Literal['mmse', 'ls']
ESTIMATORS: Tuple[Estimator, ...] = ('mmse', 'ls')


@dataclass(frozen=True, eq=False)
class EstimateStats:
    """
    Joint Gaussian description of an estimate and its error.

    Attributes:
        mean: Mean of the estimate
        cov: Covariance of the estimate
        error_mean: Mean of h - h_hat
        error_cov: Covariance of h - h_hat
    """
    mean: NDArray[np.complex128]
    cov: NDArray[np.complex128]
    error_mean: NDArray[np.complex128]
    error_cov: NDArray[np.complex128]

    @property
    def mse(self) -> float:
        """E||h - h_hat||^2."""
        trace = np.trace(self.error_cov)
        scale = np.sqrt(self.error_cov.shape[0]) * (np.linalg.norm(self.cov) + np.linalg.norm(self.error_cov))
        value = real_part(trace, scale=scale, label="error covariance trace")
        return value + float(np.vdot(self.error_mean, self.error_mean).real)


def _require_member(group: PilotGroupStats, member: int) -> float:
    if not group.contains(member):
        raise InvalidArgumentError(f"UE {member} is not in the pilot group {group.members.tolist()}")
    return group.power_of(member)


def mmse_estimate(
    link: LinkStats,
    group: PilotGroupStats,
    y: ArrayLike,
    member: int,
) -> NDArray[np.complex128]:
    """
    MMSE estimate h_bar + sqrt(p) * R @ Psi @ (y - y_bar).

    `y` may carry leading batch axes; the last axis is the antenna axis.
    """
    p = _require_member(group, member)
    innovation = np.asarray(y, dtype=np.complex128) - group.y_bar
    weighted = group.apply_psi(innovation.reshape(-1, group.num_antennas).T)
    estimate = np.sqrt(p) * (link.cov @ weighted)
    return link.mean + estimate.T.reshape(innovation.shape)


def mmse_error_cov(link: LinkStats, group: PilotGroupStats, member: int) -> Tuple[NDArray[np.complex128], float]:
    """
    Error covariance C = R - p*tau_p*R @ Psi @ R and the MSE tr(C).
    """
    p = _require_member(group, member)
    R = link.cov
    C = R - p * group.tau_p * (R @ group.apply_psi(R))
    C = 0.5 * (C + C.conj().T)
    mse = real_part(np.trace(C), scale=np.sqrt(R.shape[0]) * np.linalg.norm(R), label="tr(C)")
    return C, mse


def mmse_estimate_stats(link: LinkStats, group: PilotGroupStats, member: int) -> EstimateStats:
    C, _ = mmse_error_cov(link, group, member)
    return EstimateStats(
        mean=link.mean.copy(),
        cov=link.cov - C,
        error_mean=np.zeros_like(link.mean),
        error_cov=C,
    )


def ls_estimate(y: ArrayLike, power: float, tau_p: int) -> NDArray[np.complex128]:
    """LS estimate y / (sqrt(p) * tau_p)."""
    if power <= 0:
        raise InvalidArgumentError(f"power must be positive, got {power}")
    return np.asarray(y, dtype=np.complex128) / (np.sqrt(power) * tau_p)


def ls_estimate_stats(link: LinkStats, group: PilotGroupStats, member: int) -> EstimateStats:
    """
    The LS estimate is Gaussian with mean y_bar/(sqrt(p) tau_p) and covariance
    psi_inv/(p tau_p); unlike MMSE it is correlated with its error.
    """
    p = _require_member(group, member)
    mean = group.y_bar / (np.sqrt(p) * group.tau_p)
    cov = group.psi_inv / (p * group.tau_p)
    return EstimateStats(
        mean=mean,
        cov=cov,
        error_mean=link.mean - mean,
        error_cov=cov - link.cov,
    )


def estimate_stats(
    estimator: Estimator,
    link: LinkStats,
    group: PilotGroupStats,
    member: int,
) -> EstimateStats:
    if estimator == 'mmse':
        return mmse_estimate_stats(link, group, member)
    if estimator == 'ls':
        return ls_estimate_stats(link, group, member)
    raise InvalidArgumentError(f"unknown estimator {estimator!r}")
