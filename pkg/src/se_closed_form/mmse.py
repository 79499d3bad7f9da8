"""
Closed-form UL SINR of MR combining with MMSE channel estimates.

All moments are evaluated for one target UE against every UE in the network at
once, using the cached traces of the serving BS.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from ..common.errors import InternalComputationError, InvalidArgumentError
from ..common.numerics import real_part
from ..estimation.serving_cell import ServingCell
from .breakdown import SinrBreakdownMmse, se_from_sinr

# Agreement required between the normalized and the raw-moment assembly,
# relative to the conditioning of the denominator.
ROUTE_RTOL = 1e-10


@dataclass(frozen=True)
class _MmseTerms:
    signal_moment: float
    trace_q: float
    norm2: float
    base: NDArray[np.float64]
    coherent: NDArray[np.float64]


def _check_target(cell: ServingCell, target: int) -> None:
    if not 0 <= target < cell.num_ues:
        raise InvalidArgumentError(f"target UE {target} out of range [0, {cell.num_ues})")


def _mmse_terms(cell: ServingCell, target: int) -> _MmseTerms:
    _check_target(cell, target)
    tau_p = cell.config.tau_p
    group = cell.group_of(target)
    p_t = float(cell.powers[target])
    covs, means = cell.block.covs, cell.block.means
    R_t, h_t = covs[target], means[target]

    # Psi R_t, and Q = p tau_p R_t Psi R_t (covariance of the estimate)
    A = group.apply_psi(R_t)
    Q = p_t * tau_p * (R_t @ A)
    Q = 0.5 * (Q + Q.conj().T)
    q_norm = float(np.linalg.norm(Q))
    trace_q = real_part(np.trace(Q), scale=np.sqrt(R_t.shape[0]) * q_norm, label="tr(Q)")

    inner = means.conj() @ h_t
    norm2 = float(inner[target].real)

    t1 = real_part(cell.flat_covs @ Q.T.ravel(), scale=cell.cov_norms * q_norm, label="tr(R Q)")
    t2 = real_part(
        np.einsum('nm,mk,nk->n', means.conj(), Q, means),
        scale=q_norm * cell.mean_norms2,
        label="h_bar^H Q h_bar",
    )
    t3 = real_part(
        np.einsum('nmk,k->nm', covs, h_t) @ h_t.conj(),
        scale=cell.cov_norms * norm2,
        label="h_bar_t^H R h_bar_t",
    )
    t4 = np.abs(inner) ** 2
    base = t1 + t2 + t3 + t4

    mask = cell.copilot_mask(target)
    c = cell.flat_covs[mask] @ A.T.ravel()
    p_n = cell.powers[mask]
    coherent = np.zeros(cell.num_ues)
    coherent[mask] = (
        p_t * p_n * tau_p ** 2 * np.abs(c) ** 2
        + 2.0 * np.sqrt(p_t * p_n) * tau_p * np.real(c * inner[mask])
    )
    return _MmseTerms(
        signal_moment=trace_q + norm2,
        trace_q=trace_q,
        norm2=norm2,
        base=base,
        coherent=coherent,
    )


def mmse_signal_moments(cell: ServingCell, target: int) -> Tuple[float, float]:
    """
    E{v^H h} and E{||v||^2} for v = MMSE estimate of the target's channel.

    Both equal p tau_p tr(R Psi R) + ||h_bar||^2; the second is evaluated from the
    estimate's statistics and checked against the first.
    """
    terms = _mmse_terms(cell, target)
    stats = cell.estimate_stats('mmse', target)
    cov_scale = float(np.linalg.norm(stats.cov)) * np.sqrt(stats.cov.shape[0])
    norm_moment = (
        real_part(np.trace(stats.cov), scale=cov_scale, label="tr(cov)")
        + float(np.vdot(stats.mean, stats.mean).real)
    )
    if abs(norm_moment - terms.signal_moment) > ROUTE_RTOL * abs(terms.signal_moment):
        raise InternalComputationError(
            f"E{{v^H h}}={terms.signal_moment!r} differs from E{{||v||^2}}={norm_moment!r}"
        )
    return terms.signal_moment, norm_moment


def mmse_cross_moment(
    cell: ServingCell,
    target: int,
    interferer: Optional[int] = None,
) -> Union[float, NDArray[np.float64]]:
    """
    E{|v^H h_n|^2} for the target's MMSE-based MR combiner.

    Returns the value for `interferer`, or an (N,) array over every UE when omitted.
    Copilot UEs (the target included) carry the additional coherent terms.
    """
    terms = _mmse_terms(cell, target)
    moments = terms.base + terms.coherent
    if interferer is None:
        return moments
    _check_target(cell, interferer)
    return float(moments[interferer])


def sinr_mmse(cell: ServingCell, target: int) -> SinrBreakdownMmse:
    """
    Closed-form SINR of the target UE at its serving BS.

    The normalized assembly (xi, Gamma, nu) and the assembly from the raw moments are
    both evaluated and must agree.

    Raises:
        InternalComputationError: non-positive denominator or disagreeing routes
    """
    config = cell.config
    terms = _mmse_terms(cell, target)
    powers = cell.powers
    p_t = float(powers[target])
    sigma2 = config.sigma2_ul
    D = terms.signal_moment
    N = cell.num_ues

    if D <= 0.0:
        # no channel to this UE at all
        zeros = np.zeros(N)
        return SinrBreakdownMmse(
            ue=target, bs=cell.bs, signal=0.0, xi=zeros, gamma_coh=zeros.copy(), nu=0.0,
            noise=sigma2, sinr=0.0, sinr_raw=0.0, se=0.0,
        )

    xi = terms.base / D
    gamma_coh = terms.coherent / D
    gamma_coh[target] = 0.0
    nu = terms.norm2 ** 2 / D
    signal = p_t * D

    denominator = float(powers @ xi + powers @ gamma_coh - p_t * nu + sigma2)
    if not denominator > 0.0:
        raise InternalComputationError(
            f"non-positive SINR denominator {denominator!r} for UE {target} at BS {cell.bs}"
        )
    sinr = signal / denominator

    raw = terms.base + terms.coherent
    weighted = powers * raw
    raw_denominator = float(weighted.sum() - p_t * D ** 2 + sigma2 * D)
    if not raw_denominator > 0.0:
        raise InternalComputationError(
            f"non-positive raw SINR denominator {raw_denominator!r} for UE {target}"
        )
    sinr_raw = p_t * D ** 2 / raw_denominator
    conditioning = (float(np.abs(weighted).sum()) + p_t * D ** 2 + sigma2 * D) / raw_denominator
    if abs(sinr - sinr_raw) > ROUTE_RTOL * max(1.0, conditioning) * sinr:
        raise InternalComputationError(
            f"SINR routes disagree for UE {target}: {sinr!r} vs {sinr_raw!r}"
        )

    return SinrBreakdownMmse(
        ue=target,
        bs=cell.bs,
        signal=signal,
        xi=xi,
        gamma_coh=gamma_coh,
        nu=nu,
        noise=sigma2,
        sinr=sinr,
        sinr_raw=sinr_raw,
        se=se_from_sinr(sinr, config),
    )
