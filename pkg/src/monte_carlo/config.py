"""
Monte Carlo settings.
"""

from pydantic import BaseModel, ConfigDict, Field

# Complex entries held per trial block (channels of every UE at one BS)
BLOCK_ENTRY_BUDGET = 4_000_000


class McConfig(BaseModel):
    """
    Attributes:
        n_realizations: Channel/noise trials per BS
        seed: Root seed of every substream
        batch_size: Upper bound on trials per block
        sigma_factor: Pass threshold in propagated standard errors
        relative_target: Relative SINR error reported as "within target"
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    n_realizations: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0)
    batch_size: int = Field(default=1000, ge=1)
    sigma_factor: float = Field(default=5.0, gt=0)
    relative_target: float = Field(default=0.03, gt=0)

    def block_size(self, num_ues: int, num_antennas: int) -> int:
        """Trials per block; depends only on these settings and the problem size."""
        return min(self.batch_size, max(1, BLOCK_ENTRY_BUDGET // (num_ues * num_antennas)))

    def blocks(self, num_ues: int, num_antennas: int) -> "list[int]":
        """Trial count of every block, in block order."""
        size = self.block_size(num_ues, num_antennas)
        full, rest = divmod(self.n_realizations, size)
        return [size] * full + ([rest] if rest else [])
