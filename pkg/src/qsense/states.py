"""Quantum state construction, validation, and pure-state ensembles.

Pure states are 1-D complex unit vectors, density matrices are square
complex arrays validated to be Hermitian, positive semidefinite (negative
round-off dust clamped) and unit trace.  A :class:`Decomposition` is a
weighted ensemble of pure states realizing a density matrix; ensembles of
the same matrix are related by isometric mixing
(sqrt(q_j) |phi_j> = sum_i V_ji sqrt(p_i) |psi_i>).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    DimensionOverflowError,
    NotIsometryError,
    NotNormalizedError,
    NotPSDError,
    WeightMismatchError,
)
from .linalg import DEFAULT_DIM_CAP, HERM_TOL, PSD_TOL, eigh, require_hermitian

NORM_TOL = 1e-10
# Ensemble terms with weight below this are round-off of the mixing formula.
ZERO_WEIGHT_TOL = 1e-14
# Spectral gap below which the extremal eigenvector pair is ill-defined.
DEGENERACY_TOL = 1e-12


def get_rng(seed) -> np.random.Generator:
    """Accept an integer seed or a ready Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def as_pure_state(psi, tol: float = NORM_TOL) -> np.ndarray:
    """Coerce to a 1-D complex vector and check unit norm."""
    v = np.asarray(psi, dtype=complex).ravel()
    if v.size < 1 or not np.all(np.isfinite(v.view(float))):
        raise ValueError("state vector must be nonempty and finite")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise NotNormalizedError(f"|<psi|psi> - 1| = {abs(norm**2 - 1):.3e}")
    return v


def as_density_matrix(
    rho,
    psd_tol: float = PSD_TOL,
    trace_tol: float = 1e-10,
) -> np.ndarray:
    """Validate and canonicalize a density matrix.

    Symmetrizes, clamps eigenvalue dust in [-psd_tol, 0) to zero, checks
    unit trace within ``trace_tol``, and rebuilds the matrix from the
    clamped spectrum normalized to trace exactly 1.
    """
    a = require_hermitian(rho, HERM_TOL)
    es = eigh(a)
    lo = float(es.eigenvalues[0])
    if lo < -psd_tol:
        raise NotPSDError(f"eigenvalue {lo:.3e} below -{psd_tol:.1e}")
    tr = float(np.sum(es.eigenvalues))
    if abs(tr - 1.0) > trace_tol:
        raise WeightMismatchError(f"trace {tr!r} deviates from 1 beyond {trace_tol:.1e}")
    vals = np.clip(es.eigenvalues, 0.0, None)
    vals /= vals.sum()
    v = es.eigenvectors
    out = (v * vals) @ v.conj().T
    return 0.5 * (out + out.conj().T)


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

@dataclass
class Decomposition:
    """Weighted pure-state ensemble: weights p_i and states |psi_i>."""

    weights: np.ndarray
    states: np.ndarray  # shape (n_terms, dim), rows are unit vectors

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        self.states = np.atleast_2d(np.asarray(self.states, dtype=complex))
        if self.weights.shape[0] != self.states.shape[0]:
            raise ValueError("one weight per state required")
        if np.any(self.weights < -ZERO_WEIGHT_TOL) or np.any(self.weights > 1.0 + NORM_TOL):
            raise WeightMismatchError("weights must lie in [0, 1]")
        self.weights = np.clip(self.weights, 0.0, None)
        total = float(self.weights.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise WeightMismatchError(f"weights sum to {total!r}, not 1")
        norms = np.linalg.norm(self.states, axis=1)
        if np.max(np.abs(norms - 1.0)) > NORM_TOL:
            raise NotNormalizedError("every ensemble state must be unit norm")

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def __len__(self) -> int:
        return self.weights.shape[0]

    def __iter__(self):
        return zip(self.weights, self.states)


def density_from_pure(psi) -> np.ndarray:
    """Rank-1 projector |psi><psi|."""
    v = as_pure_state(psi)
    return np.outer(v, v.conj())


def mix(d: Decomposition) -> np.ndarray:
    """Density matrix sum_i p_i |psi_i><psi_i| of an ensemble.

    Accumulates weighted projectors term by term; a single-term ensemble
    reproduces its member's projector bit for bit.
    """
    rho = None
    for p, psi in d:
        term = p * np.outer(psi, psi.conj())
        rho = term if rho is None else rho + term
    return as_density_matrix(rho)


def product_state(phi, n_copies: int, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """n-fold tensor power of a single-site pure state."""
    v = as_pure_state(phi)
    if n_copies < 1:
        raise ValueError("n_copies must be >= 1")
    if v.size ** n_copies > cap:
        raise DimensionOverflowError(
            f"product dim {v.size}**{n_copies} exceeds cap {cap}"
        )
    out = v
    for _ in range(n_copies - 1):
        out = np.kron(out, v)
    return out / np.linalg.norm(out)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Gauge-fix an eigenvector: largest-magnitude entry made real positive."""
    k = int(np.argmax(np.abs(v)))
    phase = v[k] / abs(v[k])
    return v / phase


def extremal_entangled_state(h, n_sites: int, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """GHZ-type state over the extreme eigenvectors of a site generator.

    Returns (|e_max>^(x)K + |e_min>^(x)K)/sqrt(2) where e_max, e_min are
    the eigenvectors of ``h`` for its largest and smallest eigenvalues.
    Raises DegenerateSpectrumError when the spectral width vanishes.
    """
    es = eigh(h)
    if float(es.eigenvalues[-1] - es.eigenvalues[0]) < DEGENERACY_TOL:
        raise DegenerateSpectrumError("generator spectrum has zero width")
    e_min = _fix_phase(es.eigenvectors[:, 0])
    e_max = _fix_phase(es.eigenvectors[:, -1])
    top = product_state(e_max, n_sites, cap=cap)
    bottom = product_state(e_min, n_sites, cap=cap)
    return (top + bottom) / np.sqrt(2.0)


# ---------------------------------------------------------------------------
# Random ensembles (all deterministic in the seed)
# ---------------------------------------------------------------------------

def random_pure(dim: int, seed) -> np.ndarray:
    """Haar-random pure state: normalized complex-normal vector."""
    rng = get_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rank: int, seed) -> np.ndarray:
    """Ginibre-ensemble density matrix G G^dag / tr(G G^dag) of given rank."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = get_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return as_density_matrix(rho)


def random_hermitian(dim: int, seed) -> np.ndarray:
    """Gaussian Hermitian matrix (A + A^dag)/2 with complex-normal A."""
    rng = get_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (a + a.conj().T)


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fixing."""
    rng = get_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# ---------------------------------------------------------------------------
# Decompositions of a mixed state
# ---------------------------------------------------------------------------

def eigen_decomposition(rho) -> Decomposition:
    """Spectral ensemble of a density matrix: nonzero eigenvalues as weights."""
    valid = as_density_matrix(rho)
    es = eigh(valid)
    keep = es.eigenvalues > 1e-12
    weights = es.eigenvalues[keep]
    states = es.eigenvectors[:, keep].T
    order = np.argsort(weights)[::-1]
    weights = weights[order] / weights.sum()
    return Decomposition(weights=weights, states=states[order])


def unitary_mixed_decomposition(d: Decomposition, v) -> Decomposition:
    """Re-mix an ensemble through an isometry.

    ``v`` has shape (m, r) with orthonormal columns, r = len(d) (an m x m
    unitary is accepted; its first r columns are used).  The output terms
    are sqrt(q_j)|phi_j> = sum_i V_ji sqrt(p_i)|psi_i>, with zero-weight
    terms dropped; the mixed density matrix is unchanged.
    """
    vm = np.asarray(v, dtype=complex)
    if vm.ndim != 2 or vm.shape[0] < len(d) or vm.shape[1] < len(d):
        raise NotIsometryError(
            f"mixing matrix shape {vm.shape} cannot map {len(d)} terms"
        )
    cols = vm[:, : len(d)]
    gram = cols.conj().T @ cols
    dev = float(np.max(np.abs(gram - np.eye(len(d)))))
    if dev > NORM_TOL:
        raise NotIsometryError(f"columns deviate from orthonormal by {dev:.3e}")
    scaled = np.sqrt(d.weights)[:, None] * d.states
    mixed = cols @ scaled
    q = np.sum(np.abs(mixed) ** 2, axis=1)
    keep = q > ZERO_WEIGHT_TOL
    q = q[keep]
    states = mixed[keep] / np.sqrt(q)[:, None]
    return Decomposition(weights=q / q.sum(), states=states)


def random_mixed_decomposition(rho, seed, extra_terms: int = 3) -> Decomposition:
    """Random ensemble of ``rho``: spectral ensemble re-mixed by a Haar isometry.

    The number of output terms is drawn uniformly from rank..rank+extra_terms,
    covering ensembles with more members than the matrix rank.
    """
    rng = get_rng(seed)
    base = eigen_decomposition(rho)
    m = len(base) + int(rng.integers(0, extra_terms + 1))
    u = haar_unitary(m, rng)
    return unitary_mixed_decomposition(base, u)


# ---------------------------------------------------------------------------
# Reduced states (purity checks only)
# ---------------------------------------------------------------------------

def reduced_state(psi, site_dims: list[int] | tuple[int, ...], keep) -> np.ndarray:
    """Reduced density matrix of a pure state on the ``keep`` subsystems."""
    v = as_pure_state(psi)
    dims = tuple(int(x) for x in site_dims)
    if int(np.prod(dims)) != v.size:
        raise ValueError(f"site dims {dims} do not factor dim {v.size}")
    keep = tuple(sorted(int(k) for k in np.atleast_1d(keep)))
    rest = tuple(i for i in range(len(dims)) if i not in keep)
    tens = v.reshape(dims).transpose(keep + rest)
    dk = int(np.prod([dims[i] for i in keep]))
    m = tens.reshape(dk, -1)
    return m @ m.conj().T
