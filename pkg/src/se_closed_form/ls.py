"""
Closed-form UL SINR of MR combining with LS channel estimates.

With v = y / (sqrt(p) tau_p) the estimate is correlated with the channels of every
UE sharing the target's pilot, which gives copilot interferers their own second
moment. Non-copilot interferers are independent of the processed pilot.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from ..common.errors import InternalComputationError, InvalidArgumentError
from ..common.numerics import real_part
from ..estimation.serving_cell import ServingCell
from .breakdown import SinrBreakdownLs, se_from_sinr
from .mmse import ROUTE_RTOL


@dataclass(frozen=True)
class _LsTerms:
    # moments of the processed pilot y itself: E{y^H h_t}, E{|y^H h_n|^2}, E{||y||^2}
    cross_signal: complex
    cross_second: NDArray[np.float64]
    norm2: float
    scale: float


def _ls_terms(cell: ServingCell, target: int) -> _LsTerms:
    if not 0 <= target < cell.num_ues:
        raise InvalidArgumentError(f"target UE {target} out of range [0, {cell.num_ues})")
    tau_p = cell.config.tau_p
    group = cell.group_of(target)
    p_t = float(cell.powers[target])
    covs, means = cell.block.covs, cell.block.means
    psi_inv, y_bar = group.psi_inv, group.y_bar
    psi_norm = float(np.linalg.norm(psi_inv))
    y_norm2 = float(np.vdot(y_bar, y_bar).real)

    tr_r_psi = real_part(
        cell.flat_covs @ psi_inv.T.ravel(), scale=cell.cov_norms * psi_norm, label="tr(R psi_inv)"
    )
    r_y = np.einsum('nmk,k->nm', covs, y_bar)
    y_r_y = real_part(r_y @ y_bar.conj(), scale=cell.cov_norms * y_norm2, label="y_bar^H R y_bar")
    h_psi_h = real_part(
        np.einsum('nm,mk,nk->n', means.conj(), psi_inv, means),
        scale=psi_norm * cell.mean_norms2,
        label="h_bar^H psi_inv h_bar",
    )
    y_h = means @ y_bar.conj()

    # independent of the pilot signal
    second = tau_p * tr_r_psi + y_r_y + tau_p * h_psi_h + np.abs(y_h) ** 2

    mask = cell.copilot_mask(target)
    p_n = cell.powers[mask]
    a = np.sqrt(p_n) * tau_p
    tr_r = cell.cov_traces[mask]
    h_h = cell.mean_norms2[mask]
    y_r_h = np.conj(np.sum(means[mask].conj() * r_y[mask], axis=1))
    h_r_h = real_part(
        np.einsum('nm,nmk,nk->n', means[mask].conj(), covs[mask], means[mask]),
        scale=cell.cov_norms[mask] * h_h,
        label="h_bar^H R h_bar",
    )
    # pilot signal with the interferer's own contribution removed: mean x_bar,
    # covariance tau_p * (psi_inv - p tau_p R)
    x_r_x = y_r_y[mask] - 2.0 * a * np.real(y_r_h) + a ** 2 * h_r_h
    h_omega_h = h_psi_h[mask] - p_n * tau_p * h_r_h
    x_h = y_h[mask] - a * h_h
    second[mask] = (
        tau_p * tr_r_psi[mask]
        + 2.0 * a * np.real(y_h[mask] * tr_r + y_r_h)
        + a ** 2 * tr_r ** 2
        + x_r_x
        + tau_p * h_omega_h
        + np.abs(x_h) ** 2
        + a ** 2 * h_h ** 2
        + 2.0 * a * np.real(x_h) * h_h
    )

    trace_psi = real_part(np.trace(psi_inv), scale=np.sqrt(psi_inv.shape[0]) * psi_norm, label="tr(psi_inv)")
    cross_signal = np.sqrt(p_t) * tau_p * cell.cov_traces[target] + y_h[target]
    return _LsTerms(
        cross_signal=complex(cross_signal),
        cross_second=second,
        norm2=tau_p * trace_psi + y_norm2,
        scale=p_t * tau_p ** 2,
    )


def ls_moments(cell: ServingCell, target: int) -> Tuple[complex, float]:
    """
    (eta, mu) = (E{v^H h_t}, E{||v||^2}) for v = LS estimate of the target.

    eta = tr(R_t) + y_bar^H h_bar_t / (sqrt(p) tau_p) is complex in general.
    """
    terms = _ls_terms(cell, target)
    eta = terms.cross_signal / np.sqrt(terms.scale)
    mu = terms.norm2 / terms.scale
    return complex(eta), float(mu)


def ls_cross_moment(
    cell: ServingCell,
    target: int,
    interferer: Optional[int] = None,
) -> Union[float, NDArray[np.float64]]:
    """
    chi_n = E{|v^H h_n|^2} for the target's LS-based MR combiner; the value for
    `interferer`, or an (N,) array over every UE when omitted.
    """
    terms = _ls_terms(cell, target)
    chi = terms.cross_second / terms.scale
    if interferer is None:
        return chi
    if not 0 <= interferer < cell.num_ues:
        raise InvalidArgumentError(f"interferer {interferer} out of range")
    return float(chi[interferer])


def sinr_ls(cell: ServingCell, target: int) -> SinrBreakdownLs:
    """
    Closed-form SINR p|eta|^2 / (sum_n p_n chi_n - p|eta|^2 + mu sigma^2).

    Raises:
        InternalComputationError: non-positive denominator or disagreeing routes
    """
    config = cell.config
    terms = _ls_terms(cell, target)
    powers = cell.powers
    p_t = float(powers[target])
    sigma2 = config.sigma2_ul

    eta = terms.cross_signal / np.sqrt(terms.scale)
    mu = terms.norm2 / terms.scale
    chi = terms.cross_second / terms.scale
    signal = p_t * abs(eta) ** 2
    denominator = float(powers @ chi - signal + mu * sigma2)
    if not denominator > 0.0:
        raise InternalComputationError(
            f"non-positive SINR denominator {denominator!r} for UE {target} at BS {cell.bs}"
        )
    sinr = signal / denominator

    # same ratio from the moments of the unscaled pilot signal
    raw_signal = p_t * abs(terms.cross_signal) ** 2
    weighted = powers * terms.cross_second
    raw_denominator = float(weighted.sum() - raw_signal + sigma2 * terms.norm2)
    if not raw_denominator > 0.0:
        raise InternalComputationError(
            f"non-positive raw SINR denominator {raw_denominator!r} for UE {target}"
        )
    sinr_raw = raw_signal / raw_denominator
    conditioning = (float(np.abs(weighted).sum()) + raw_signal + sigma2 * terms.norm2) / raw_denominator
    if abs(sinr - sinr_raw) > ROUTE_RTOL * max(1.0, conditioning) * max(sinr, sinr_raw):
        raise InternalComputationError(
            f"SINR routes disagree for UE {target}: {sinr!r} vs {sinr_raw!r}"
        )

    return SinrBreakdownLs(
        ue=target,
        bs=cell.bs,
        eta=complex(eta),
        mu=float(mu),
        chi=chi,
        noise=sigma2,
        sinr=sinr,
        sinr_raw=sinr_raw,
        se=se_from_sinr(sinr, config),
    )
