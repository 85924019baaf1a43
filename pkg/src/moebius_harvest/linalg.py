"""Dense Hermitian eigenvalues via cyclic complex Jacobi rotations.

This is the package's independent route to ring spectra: it never sees the
closed-form dispersion, so analytic band energies and mode transforms can be
checked against it (and vice versa).
"""

import numpy as np

from . import backend
from .errors import NumericalError, ValidationError

MAX_DIMENSION = 2048
HERMITICITY_ATOL = 1e-12
OFF_NORM_FACTOR = 1e-12
MAX_SWEEPS = 64


def dense_hermitian_eigenvalues(matrix) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    The matrix must equal its conjugate transpose within 1e-12 (relative to
    its largest entry when that exceeds unit scale) and have dimension at
    most 2048. Rotations stop once the off-diagonal Frobenius norm falls
    below 1e-12 times the input Frobenius norm.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"matrix: must be square (got shape {a.shape})")
    n = a.shape[0]
    if n == 0:
        raise ValidationError("matrix: must be non-empty")
    if n > MAX_DIMENSION:
        raise ValidationError(
            f"matrix: dimension {n} exceeds the supported maximum {MAX_DIMENSION}")
    a = a.astype(np.complex128)
    scale = max(1.0, float(np.max(np.abs(a))))
    defect = float(np.max(np.abs(a - a.conj().T)))
    if defect > HERMITICITY_ATOL * scale:
        raise ValidationError(
            f"matrix: not Hermitian (max asymmetry {defect:.3e} exceeds "
            f"{HERMITICITY_ATOL * scale:.3e})")
    # fold the sub-tolerance asymmetry away so the rotations see exact input
    a = 0.5 * (a + a.conj().T)
    tol_off = OFF_NORM_FACTOR * float(np.sqrt(np.sum(np.abs(a) ** 2)))
    values, sweeps, converged = backend.jacobi_eigenvalues(
        np.ascontiguousarray(a), tol_off, MAX_SWEEPS)
    if not converged:
        raise NumericalError(
            f"Jacobi rotations did not reach the off-diagonal tolerance "
            f"within {MAX_SWEEPS} sweeps (dimension {n})")
    return values
