"""
Streaming sample moments with pairwise merging.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

# Leading features whose full covariance is tracked; the rest keep variances only
CORE_FEATURES = 4


@dataclass(frozen=True, eq=False)
class MomentAccumulator:
    """
    Count, mean and centered second moments of per-trial feature vectors.

    Attributes:
        count: Number of trials
        mean: (d,) feature means
        m2_diag: (d,) sums of squared deviations
        m2_core: (c, c) cross sums of deviations of the first c features
    """
    count: int
    mean: NDArray[np.float64]
    m2_diag: NDArray[np.float64]
    m2_core: NDArray[np.float64]

    @classmethod
    def from_samples(cls, samples: ArrayLike, core: int = CORE_FEATURES) -> 'MomentAccumulator':
        x = np.asarray(samples, dtype=np.float64)
        mean = x.mean(axis=0)
        centered = x - mean
        head = centered[:, :core]
        return cls(
            count=x.shape[0],
            mean=mean,
            m2_diag=np.sum(centered ** 2, axis=0),
            m2_core=head.T @ head,
        )

    def merge(self, other: 'MomentAccumulator') -> 'MomentAccumulator':
        """Combine with the moments of a disjoint set of trials."""
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        total = self.count + other.count
        delta = other.mean - self.mean
        weight = self.count * other.count / total
        core = self.m2_core.shape[0]
        return MomentAccumulator(
            count=total,
            mean=self.mean + delta * (other.count / total),
            m2_diag=self.m2_diag + other.m2_diag + delta ** 2 * weight,
            m2_core=self.m2_core + other.m2_core + np.outer(delta[:core], delta[:core]) * weight,
        )

    def variance(self) -> NDArray[np.float64]:
        """Unbiased per-feature variance (inf with fewer than two trials)."""
        if self.count < 2:
            return np.full_like(self.mean, np.inf)
        return self.m2_diag / (self.count - 1)

    def core_covariance(self) -> NDArray[np.float64]:
        if self.count < 2:
            return np.full_like(self.m2_core, np.inf)
        return self.m2_core / (self.count - 1)

    def standard_error(self) -> NDArray[np.float64]:
        return np.sqrt(self.variance() / self.count)
