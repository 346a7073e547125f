"""Fidelity, Bures distance, quantum Fisher information, and sensitivity bounds.

Two independent routes to the quantum Fisher information are provided:

* ``qfi_sld`` evaluates the symmetric-logarithmic-derivative quadratic form
  sum_{jk} 2 |<j|drho|k>|^2 / (lam_j + lam_k) in the state's eigenbasis;
* ``qfi_fd`` measures the curvature of the squared Bures distance
  d^2(rho(x), rho(x+dx)) = 2 (1 - sqrt(F)) along the channel's parameter,
  using qfi = 4 d^2 / dx^2.

They agree for smooth full-support paths; at points where the state changes
rank the finite-difference curvature and the regularized SLD sum can differ,
so cross-checks should stay away from rank boundaries.  The minimum
uncertainty after N repetitions is 1 / (sqrt(N) sqrt(qfi)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import DEFAULT_FD_STEP, GeneratorSpec, ParamChannel, apply
from .errors import (
    DimensionMismatchError,
    NotHermitianError,
    NotTracelessError,
    StepOutOfRangeError,
)
from .linalg import eigh, sqrt_psd, trace_norm

FD_STEP_MIN = 1e-6
FD_STEP_MAX = 1e-2
# Eigenvalue / denominator cutoff regularizing the SLD sum at rank boundaries.
SLD_EIGENVALUE_CUTOFF = 1e-12


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """State fidelity ||rho^(1/2) sigma^(1/2)||_1^2, clamped into [0, 1]."""
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"shapes {rho.shape} and {sigma.shape} differ")
    f = trace_norm(sqrt_psd(rho) @ sqrt_psd(sigma)) ** 2
    return float(min(max(f, 0.0), 1.0))


def bures_distance_sq(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Squared Bures distance 2 (1 - sqrt(F(rho, sigma)))."""
    return 2.0 * (1.0 - math.sqrt(fidelity(rho, sigma)))


def qfi_sld(rho: np.ndarray, drho: np.ndarray) -> float:
    """Quantum Fisher information from the SLD quadratic form.

    ``drho`` is the (Hermitian, traceless) parameter derivative of the
    state.  Terms with lam_j + lam_k below the eigenvalue cutoff are
    skipped; eigenvalue dust below the cutoff counts as exactly zero.
    """
    if rho.shape != drho.shape:
        raise DimensionMismatchError(f"shapes {rho.shape} and {drho.shape} differ")
    dev = float(np.max(np.abs(drho - drho.conj().T)))
    if dev > 1e-8:
        raise NotHermitianError(f"drho deviates from Hermitian by {dev:.3e}")
    tr = complex(np.trace(drho))
    if abs(tr) > 1e-8:
        raise NotTracelessError(f"drho trace {tr!r} deviates from 0")

    es = eigh(rho)
    lam = np.where(es.eigenvalues < SLD_EIGENVALUE_CUTOFF, 0.0, es.eigenvalues)
    v = es.eigenvectors
    m = v.conj().T @ drho @ v
    denom = lam[:, None] + lam[None, :]
    mask = denom > SLD_EIGENVALUE_CUTOFF
    terms = np.zeros_like(denom)
    terms[mask] = 2.0 * np.abs(m[mask]) ** 2 / denom[mask]
    return float(max(terms.sum(), 0.0))


def fd_bures_sq(ch: ParamChannel, rho0: np.ndarray, x: float, dx: float) -> float:
    """Squared Bures distance between the states propagated to x and x+dx."""
    a = apply(ch, rho0, x)
    b = apply(ch, rho0, x + dx)
    return bures_distance_sq(a, b)


def qfi_from_bures_sq(d2: float, dx: float) -> float:
    """Convert a squared Bures step into a Fisher-information estimate."""
    return 4.0 * d2 / dx**2


def qfi_fd(
    ch: ParamChannel, rho0: np.ndarray, x: float, dx: float = DEFAULT_FD_STEP
) -> float:
    """Finite-difference QFI along the channel's parameter at x.

    The squared Bures distance between neighboring propagated states is
    already second order in dx, so a forward pair (x, x+dx) suffices.
    """
    if not FD_STEP_MIN <= dx <= FD_STEP_MAX:
        raise StepOutOfRangeError(
            f"dx = {dx!r} outside [{FD_STEP_MIN}, {FD_STEP_MAX}]"
        )
    return qfi_from_bures_sq(fd_bures_sq(ch, rho0, x, dx), dx)


@dataclass(frozen=True)
class SensitivityReport:
    """Minimum parameter uncertainty attainable from N repeated probes."""

    qfi: float
    n_repetitions: int
    delta_x_min: float

    @classmethod
    def from_qfi(cls, qfi: float, n_repetitions: int) -> "SensitivityReport":
        if qfi < 0:
            raise ValueError(f"qfi must be >= 0, got {qfi}")
        if n_repetitions < 1:
            raise ValueError(f"n_repetitions must be >= 1, got {n_repetitions}")
        if qfi == 0.0:
            dx = math.inf
        else:
            dx = 1.0 / (math.sqrt(n_repetitions) * math.sqrt(qfi))
        return cls(qfi=float(qfi), n_repetitions=int(n_repetitions), delta_x_min=dx)


def delta_x_min(qfi: float, n_repetitions: int) -> SensitivityReport:
    """Cramer-Rao minimum uncertainty 1/(sqrt(N) sqrt(qfi)); +inf at qfi = 0."""
    return SensitivityReport.from_qfi(qfi, n_repetitions)


def bound_product(g: GeneratorSpec, n_repetitions: int) -> float:
    """Best sensitivity with product probes: 1/(sqrt(N K) (lam_max - lam_min))."""
    g.require_nondegenerate()
    return 1.0 / (math.sqrt(n_repetitions * g.n_sites) * g.spectral_width)


def bound_entangled(g: GeneratorSpec, n_repetitions: int) -> float:
    """Best sensitivity with the extremal entangled probe: 1/(sqrt(N) K (lam_max - lam_min))."""
    g.require_nondegenerate()
    return 1.0 / (math.sqrt(n_repetitions) * g.n_sites * g.spectral_width)
