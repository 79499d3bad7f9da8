"""
Pilot processing at a BS: the processed pilot signal and its second-order statistics.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import cho_factor, cho_solve

from ..channel_model.data_structures import LinkBlock, SystemConfig
from ..common.errors import InvalidArgumentError


@dataclass(frozen=True, eq=False)
class PilotGroupStats:
    """
    Statistics of the processed pilot of one pilot group at one BS.

    Attributes:
        psi_inv: (M, M) sum over members of p*tau_p*R plus sigma^2*I
        y_bar: (M,) mean of the processed pilot, sum of sqrt(p)*tau_p*h_bar
        members: Global UE indices sharing this pilot
        powers: Transmit power of each member
        tau_p: Pilot length
        noise_power: sigma^2
    """
    psi_inv: NDArray[np.complex128]
    y_bar: NDArray[np.complex128]
    members: NDArray[np.int64]
    powers: NDArray[np.float64]
    tau_p: int
    noise_power: float
    _cho: Tuple[NDArray[np.complex128], bool] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        for name in ('psi_inv', 'y_bar', 'members', 'powers'):
            array = np.array(getattr(self, name), copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        object.__setattr__(self, '_cho', cho_factor(self.psi_inv, lower=True))

    @property
    def num_antennas(self) -> int:
        return int(self.y_bar.size)

    def apply_psi(self, x: ArrayLike) -> NDArray[np.complex128]:
        """Psi @ x through a Hermitian solve against psi_inv."""
        return cho_solve(self._cho, np.asarray(x, dtype=np.complex128))

    def psi(self) -> NDArray[np.complex128]:
        """Explicit Psi (for tests and diagnostics)."""
        return self.apply_psi(np.eye(self.num_antennas, dtype=np.complex128))

    def contains(self, member: int) -> bool:
        return bool(np.any(self.members == member))

    def power_of(self, member: int) -> float:
        hits = np.flatnonzero(self.members == member)
        if hits.size == 0:
            raise InvalidArgumentError(f"UE {member} does not use this pilot")
        return float(self.powers[hits[0]])


def psi_matrix(
    links: LinkBlock,
    config: SystemConfig,
    members: Optional[Sequence[int]] = None,
    powers: Optional[ArrayLike] = None,
) -> PilotGroupStats:
    """
    Build the pilot-group statistics from the links of its members.

    Args:
        links: Links seen by the BS (rows indexed by global UE index)
        config: Provides tau_p and sigma^2
        members: Rows of `links` that share the pilot (all rows when omitted)
        powers: Per-row transmit powers (config.p for every row when omitted)
    """
    n, M = links.shape
    members = np.arange(n) if members is None else np.asarray(members, dtype=np.int64)
    if members.size == 0:
        raise InvalidArgumentError("a pilot group needs at least one member")
    all_powers = np.full(n, config.p) if powers is None else np.asarray(powers, dtype=np.float64)
    if all_powers.shape != (n,):
        raise InvalidArgumentError(f"powers must have length {n}")
    member_powers = all_powers[members]
    tau_p = config.tau_p

    weights = member_powers * tau_p
    psi_inv = np.tensordot(weights, links.covs[members], axes=1) + config.sigma2_ul * np.eye(M)
    psi_inv = 0.5 * (psi_inv + psi_inv.conj().T)
    y_bar = (np.sqrt(member_powers) * tau_p) @ links.means[members]
    return PilotGroupStats(
        psi_inv=psi_inv,
        y_bar=y_bar,
        members=members,
        powers=member_powers,
        tau_p=tau_p,
        noise_power=config.sigma2_ul,
    )


def processed_pilot(
    channels: ArrayLike,
    noise: ArrayLike,
    powers: ArrayLike,
    tau_p: int,
) -> NDArray[np.complex128]:
    """
    Processed pilot signal y = sum_i sqrt(p_i) * tau_p * h_i + n.

    Args:
        channels: (..., G, M) channel realizations of the G group members
        noise: (..., M) effective pilot noise, CN(0, tau_p*sigma^2*I)
        powers: (G,) member transmit powers
        tau_p: Pilot length
    """
    h = np.asarray(channels, dtype=np.complex128)
    n = np.asarray(noise, dtype=np.complex128)
    weights = np.sqrt(np.asarray(powers, dtype=np.float64)) * tau_p
    if h.ndim < 2 or h.shape[-2] != weights.size:
        raise InvalidArgumentError(
            f"channels shape {h.shape} does not match {weights.size} group members"
        )
    if n.shape != h.shape[:-2] + h.shape[-1:]:
        raise InvalidArgumentError(f"noise shape {n.shape} does not match channels {h.shape}")
    return np.einsum('g,...gm->...m', weights, h) + n


def pilot_noise(
    num_antennas: int,
    config: SystemConfig,
    rng: np.random.Generator,
    size: Union[int, Tuple[int, ...], None] = None,
) -> NDArray[np.complex128]:
    """Effective pilot noise draws, CN(0, tau_p * sigma^2 * I), shape size + (M,)."""
    if size is None:
        shape: Tuple[int, ...] = (num_antennas,)
    elif isinstance(size, int):
        shape = (size, num_antennas)
    else:
        shape = tuple(size) + (num_antennas,)
    scale = np.sqrt(config.tau_p * config.sigma2_ul / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
