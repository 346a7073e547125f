"""Dense complex linear algebra for Hermitian operators.

Everything here works on plain ``numpy.ndarray`` values (square, complex,
finite entries).  Hermiticity is checked against a max-abs tolerance and
enforced by symmetrization before any eigendecomposition; inputs further
from Hermitian than the tolerance are rejected rather than silently fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionOverflowError,
    NotHermitianError,
    NotPSDError,
    NumericalFailureError,
)

# Max-abs deviation of M - M^dag tolerated before symmetrization.
HERM_TOL = 1e-10
# Eigenvalues in [-PSD_TOL, 0) are treated as round-off dust and clamped to 0.
PSD_TOL = 1e-10
# Largest tensor-product dimension built eagerly (12 qubits dense).
DEFAULT_DIM_CAP = 4096

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def herm_deviation(m: np.ndarray) -> float:
    """Max-abs entry of M - M^dag."""
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m, tol: float = HERM_TOL) -> np.ndarray:
    """Return the symmetrized matrix (M + M^dag)/2, or raise if too far off."""
    a = as_complex_matrix(m)
    dev = herm_deviation(a)
    if dev > tol:
        raise NotHermitianError(f"max |M - M^dag| = {dev:.3e} exceeds {tol:.1e}")
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class EigenSystem:
    """Spectral data of a Hermitian matrix.

    ``eigenvalues`` is real and ascending; the columns of ``eigenvectors``
    are the matching orthonormal eigenvectors, so
    ``eigenvectors @ diag(eigenvalues) @ eigenvectors.conj().T``
    reconstructs the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def eigh(m, tol: float = HERM_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotHermitianError if the input deviates from Hermitian by more
    than ``tol`` (max-abs), NumericalFailureError if the underlying
    iteration does not converge.
    """
    a = require_hermitian(m, tol)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigh did not converge: {exc}") from exc
    return EigenSystem(eigenvalues=vals, eigenvectors=vecs)


def sqrt_psd(m, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix.

    Eigenvalues in [-psd_tol, 0) are clamped to 0 before taking the root;
    anything below -psd_tol raises NotPSDError.  Scale-relative dust (below
    dim * eps * max eigenvalue) is also zeroed: the root's infinite slope
    at 0 would otherwise amplify rank-deficiency round-off to ~1e-8.
    """
    es = eigh(m)
    lo = float(es.eigenvalues[0])
    if lo < -psd_tol:
        raise NotPSDError(f"smallest eigenvalue {lo:.3e} below -{psd_tol:.1e}")
    dust = es.dim * np.finfo(float).eps * max(float(es.eigenvalues[-1]), 0.0)
    vals = np.where(es.eigenvalues < dust, 0.0, es.eigenvalues)
    v = es.eigenvectors
    root = (v * np.sqrt(vals)) @ v.conj().T
    return 0.5 * (root + root.conj().T)


def trace_norm(m) -> float:
    """Trace norm: sum of singular values, tr sqrt(A A^dag)."""
    a = as_complex_matrix(m)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"svd did not converge: {exc}") from exc
    return float(np.sum(s))


def expm_i_hermitian(h, t: float) -> np.ndarray:
    """Unitary exp(-i t H) for Hermitian H, via eigendecomposition."""
    es = eigh(h)
    phases = np.exp(-1j * t * es.eigenvalues)
    v = es.eigenvectors
    return (v * phases) @ v.conj().T


def tensor(a, b, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Kronecker product A (x) B, refusing products larger than ``cap``."""
    am = as_complex_matrix(a)
    bm = as_complex_matrix(b)
    out_dim = am.shape[0] * bm.shape[0]
    if out_dim > cap:
        raise DimensionOverflowError(f"tensor dim {out_dim} exceeds cap {cap}")
    return np.kron(am, bm)
