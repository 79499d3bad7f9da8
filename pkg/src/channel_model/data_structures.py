"""
Data structures for the channel model.

SystemConfig holds the global scalars of the cellular system; LinkStats describes the
first- and second-order statistics of one BS-UE channel; LinkBlock stacks every link
seen by a single BS.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..common.errors import InvalidArgumentError
from ..common.numerics import assert_hermitian


class SystemConfig(BaseModel):
    """
    Global scalars of the multi-cell system.

    Attributes:
        num_antennas: Antennas per BS (M)
        ues_per_cell: UEs dropped in each cell (K)
        num_cells: Number of cells / BSs (L)
        tau_c: Coherence block length in samples
        tau_p: Pilot length in samples
        ul_power_mw: UL transmit power per UE (p), mW
        noise_power_mw: Receiver noise power (sigma^2_ul), mW
        asd_deg: Angular standard deviation of the local scattering model, degrees
        bandwidth_hz: Channel bandwidth (informational)
        cell_side_m: Side of the square cell
        min_distance_m: Minimum UE distance to its own BS
        shadow_std_los_db: Shadow fading standard deviation of the LoS gain
        shadow_std_nlos_db: Shadow fading standard deviation of the NLoS gain
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    num_antennas: int = Field(ge=1)
    ues_per_cell: int = Field(ge=1)
    num_cells: int = Field(ge=1)
    tau_c: int = Field(ge=1)
    tau_p: int = Field(ge=1)
    ul_power_mw: float = Field(gt=0)
    noise_power_mw: float = Field(gt=0)
    asd_deg: float = Field(default=10.0, ge=0)
    bandwidth_hz: float = Field(default=20e6, gt=0)
    cell_side_m: float = Field(default=250.0, gt=0)
    min_distance_m: float = Field(default=35.0, ge=0)
    shadow_std_los_db: float = Field(default=4.0, ge=0)
    shadow_std_nlos_db: float = Field(default=10.0, ge=0)

    @model_validator(mode='after')
    def _check_coherence_block(self) -> 'SystemConfig':
        if self.tau_p < self.ues_per_cell:
            raise ValueError(
                f"tau_p ({self.tau_p}) must be at least ues_per_cell ({self.ues_per_cell}) "
                "so that the UEs of a cell get mutually orthogonal pilots"
            )
        if self.tau_c <= self.tau_p:
            raise ValueError(
                f"tau_c ({self.tau_c}) must exceed tau_p ({self.tau_p}) "
                "to leave samples for uplink data"
            )
        return self

    # Short names used by the formula code
    @property
    def M(self) -> int:
        return self.num_antennas

    @property
    def K(self) -> int:
        return self.ues_per_cell

    @property
    def L(self) -> int:
        return self.num_cells

    @property
    def p(self) -> float:
        return self.ul_power_mw

    @property
    def sigma2_ul(self) -> float:
        return self.noise_power_mw

    @property
    def tau_u(self) -> int:
        """Samples per coherence block left for uplink data."""
        return self.tau_c - self.tau_p

    @property
    def prelog(self) -> float:
        """Fraction of the coherence block used for data, tau_u / tau_c."""
        return self.tau_u / self.tau_c

    @property
    def asd_rad(self) -> float:
        return math.radians(self.asd_deg)

    @property
    def num_ues(self) -> int:
        return self.num_cells * self.ues_per_cell

    def with_antennas(self, num_antennas: int) -> 'SystemConfig':
        """Return a validated copy with a different antenna count."""
        data = self.model_dump()
        data['num_antennas'] = num_antennas
        return SystemConfig.model_validate(data)


@dataclass(frozen=True)
class LinkStats:
    """
    Statistics of the channel between one BS and one UE.

    h ~ CN(mean, cov): mean is the LoS component, cov the spatial correlation of the
    NLoS component.

    Attributes:
        mean: LoS vector, length M
        cov: NLoS correlation matrix, M x M Hermitian PSD
        beta_los_db: Large-scale gain of the LoS component (dB)
        beta_nlos_db: Large-scale gain of the NLoS component (dB)
        angle_rad: Nominal angle seen from the BS
    """
    mean: NDArray[np.complex128]
    cov: NDArray[np.complex128]
    beta_los_db: float
    beta_nlos_db: float
    angle_rad: float

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.complex128)
        cov = np.asarray(self.cov, dtype=np.complex128)
        if mean.ndim != 1:
            raise InvalidArgumentError(f"mean must be a vector, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise InvalidArgumentError(
                f"cov shape {cov.shape} does not match mean length {mean.size}"
            )
        assert_hermitian(cov, "LinkStats.cov")
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'cov', cov)

    @property
    def num_antennas(self) -> int:
        return int(self.mean.size)

    @property
    def is_rayleigh(self) -> bool:
        return not np.any(self.mean)

    @property
    def rician_factor_db(self) -> float:
        """LoS-to-NLoS power ratio in dB (-inf when the LoS component is blocked)."""
        if self.is_rayleigh:
            return -math.inf
        return self.beta_los_db - self.beta_nlos_db

    def check_psd(self, rtol: float = 1e-9) -> bool:
        """True when the smallest eigenvalue of cov is >= -rtol * trace(cov) / M."""
        eigenvalues = np.linalg.eigvalsh(self.cov)
        floor = -rtol * float(np.real(np.trace(self.cov))) / self.num_antennas
        return bool(eigenvalues.min() >= floor)


@dataclass(frozen=True)
class LinkBlock:
    """
    All links seen by one BS, stacked along the first axis (one row per UE).

    Attributes:
        means: (N, M) LoS vectors
        covs: (N, M, M) NLoS correlation matrices
        beta_los_db: (N,) LoS gains in dB
        beta_nlos_db: (N,) NLoS gains in dB
        angles_rad: (N,) nominal angles
    """
    means: NDArray[np.complex128]
    covs: NDArray[np.complex128]
    beta_los_db: NDArray[np.float64]
    beta_nlos_db: NDArray[np.float64]
    angles_rad: NDArray[np.float64]

    def __post_init__(self) -> None:
        for name in ('means', 'covs', 'beta_los_db', 'beta_nlos_db', 'angles_rad'):
            array = np.array(getattr(self, name), copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        n, m = self.means.shape
        if self.covs.shape != (n, m, m):
            raise InvalidArgumentError(
                f"covs shape {self.covs.shape} does not match means shape {self.means.shape}"
            )

    @property
    def shape(self) -> Tuple[int, int]:
        """(number of UEs, number of antennas)"""
        n, m = self.means.shape
        return int(n), int(m)

    def link(self, index: int) -> LinkStats:
        """Single-link view of row `index`."""
        return LinkStats(
            mean=self.means[index],
            cov=self.covs[index],
            beta_los_db=float(self.beta_los_db[index]),
            beta_nlos_db=float(self.beta_nlos_db[index]),
            angle_rad=float(self.angles_rad[index]),
        )

    @classmethod
    def from_links(cls, links: 'list[LinkStats]') -> 'LinkBlock':
        """Stack individual LinkStats (all with the same antenna count)."""
        if not links:
            raise InvalidArgumentError("at least one link is required")
        sizes = {link.num_antennas for link in links}
        if len(sizes) != 1:
            raise InvalidArgumentError(f"links have mixed antenna counts {sorted(sizes)}")
        return cls(
            means=np.stack([link.mean for link in links]),
            covs=np.stack([link.cov for link in links]),
            beta_los_db=np.array([link.beta_los_db for link in links], dtype=np.float64),
            beta_nlos_db=np.array([link.beta_nlos_db for link in links], dtype=np.float64),
            angles_rad=np.array([link.angle_rad for link in links], dtype=np.float64),
        )
