"""
Numeric guards for analytically real or Hermitian quantities.
"""

from typing import Union

import numpy as np
from numpy.typing import NDArray, ArrayLike

from .errors import InternalComputationError, InvalidArgumentError

# Imaginary residue allowed on quantities that are real by construction,
# relative to the natural scale of the quantity.
IMAG_RTOL = 1e-9

# Hermitian symmetry tolerance, relative to the largest entry.
HERMITIAN_RTOL = 1e-12


def real_part(
    values: ArrayLike,
    scale: ArrayLike,
    label: str,
    rtol: float = IMAG_RTOL,
) -> Union[float, NDArray[np.float64]]:
    """
    Drop the imaginary part of an analytically real quantity.

    Args:
        values: Complex scalar or array that should be real
        scale: Non-negative bound on |values| (e.g. a product of Frobenius norms)
        label: Name used in the error message
        rtol: Allowed |imag| relative to scale

    Returns:
        Real part (float for scalar input)

    Raises:
        InternalComputationError: If any imaginary residue exceeds rtol * scale
    """
    arr = np.asarray(values)
    imag = np.abs(np.imag(arr))
    limit = rtol * np.asarray(scale, dtype=np.float64)
    if np.any(imag > limit):
        worst = float(np.max(imag - limit))
        raise InternalComputationError(
            f"{label}: imaginary residue exceeds tolerance by {worst:.3e}"
        )
    real = np.real(arr).astype(np.float64)
    if real.ndim == 0:
        return float(real)
    return real


def hermitian_residual(matrix: NDArray[np.complex128]) -> float:
    """Largest |A - A^H| entry relative to the largest |A| entry (0 for the zero matrix)."""
    a = np.asarray(matrix)
    peak = float(np.max(np.abs(a))) if a.size else 0.0
    if peak == 0.0:
        return 0.0
    diff = a - np.conj(np.swapaxes(a, -1, -2))
    return float(np.max(np.abs(diff))) / peak


def assert_hermitian(matrix: NDArray[np.complex128], label: str) -> None:
    """
    Raise InvalidArgumentError unless matrix is square and Hermitian within tolerance.
    """
    a = np.asarray(matrix)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InvalidArgumentError(f"{label}: expected a square matrix, got shape {a.shape}")
    residual = hermitian_residual(a)
    if residual > HERMITIAN_RTOL:
        raise InvalidArgumentError(
            f"{label}: matrix is not Hermitian (relative residual {residual:.3e})"
        )
