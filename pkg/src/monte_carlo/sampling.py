"""
Circularly symmetric complex Gaussian sampling.
"""

from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..common.errors import InvalidArgumentError
from ..common.numerics import assert_hermitian

# Most negative eigenvalue tolerated, relative to trace / M
EIGEN_FLOOR_RTOL = 1e-9


def standard_cn(rng: np.random.Generator, shape: Tuple[int, ...]) -> NDArray[np.complex128]:
    """i.i.d. CN(0, 1) entries."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def cn_factor(cov: ArrayLike) -> NDArray[np.complex128]:
    """
    F with F F^H = cov, from an eigendecomposition with small negative eigenvalues
    clipped to zero. Works on stacks of matrices (..., M, M).

    Raises:
        InvalidArgumentError: cov is not Hermitian or clearly indefinite
    """
    cov = np.asarray(cov, dtype=np.complex128)
    assert_hermitian(cov, "covariance")
    eigenvalues, vectors = np.linalg.eigh(cov)
    M = cov.shape[-1]
    floor = -EIGEN_FLOOR_RTOL * np.real(np.trace(cov, axis1=-2, axis2=-1)) / M
    if np.any(eigenvalues.min(axis=-1) < floor):
        raise InvalidArgumentError("covariance has significantly negative eigenvalues")
    return vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))[..., np.newaxis, :]


def sample_cn(
    mean: ArrayLike,
    cov: ArrayLike,
    rng: np.random.Generator,
    size: Union[int, Tuple[int, ...], None] = None,
    factor: Optional[NDArray[np.complex128]] = None,
) -> NDArray[np.complex128]:
    """
    Draw from CN(mean, cov).

    Args:
        mean: (M,) mean vector
        cov: (M, M) Hermitian PSD covariance
        rng: Generator to draw from
        size: Leading sample shape (a single vector when omitted)
        factor: Precomputed cn_factor(cov)

    Returns:
        Samples of shape size + (M,)
    """
    mean = np.asarray(mean, dtype=np.complex128)
    F = cn_factor(cov) if factor is None else factor
    if size is None:
        shape: Tuple[int, ...] = ()
    elif isinstance(size, int):
        shape = (size,)
    else:
        shape = tuple(size)
    z = standard_cn(rng, shape + (mean.size,))
    return mean + z @ F.T
