"""Smoothly parametrized linear maps on density matrices.

A channel is represented extensionally: a function x -> [K_1(x), ...]
producing Kraus operators at each parameter value, with trace preservation
sum_j K_j(x)^dag K_j(x) = I.  Shipped families are unitary evolutions
generated by x * sum_i h_i over identical subsystems, optionally composed
with a depolarizing channel; parameter derivatives are taken by central
finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    CPTPViolationError,
    DegenerateSpectrumError,
    DimensionMismatchError,
    DimensionOverflowError,
    ParameterOutOfRangeError,
    StepTooSmallError,
)
from .linalg import DEFAULT_DIM_CAP, eigh, expm_i_hermitian, require_hermitian
from .states import DEGENERACY_TOL, as_density_matrix

# Default central-difference step: balances O(dx^2) truncation against
# double-precision cancellation for operators of norm ~1.
DEFAULT_FD_STEP = 1e-4
CPTP_TRACE_TOL = 1e-8


@dataclass
class ParamChannel:
    """Family of linear trace-preserving maps given by Kraus operators."""

    dim: int
    kraus_at: Callable[[float], list[np.ndarray]]
    smoothness_step: float = DEFAULT_FD_STEP


@dataclass
class GeneratorSpec:
    """Single-site Hermitian generator replicated over ``n_sites`` subsystems.

    ``lam_max`` and ``lam_min`` are the extreme eigenvalues of the site
    generator; their difference sets the attainable sensitivity scale.
    """

    h: np.ndarray
    n_sites: int
    lam_max: float = field(init=False)
    lam_min: float = field(init=False)

    def __post_init__(self):
        self.h = require_hermitian(self.h)
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        vals = eigh(self.h).eigenvalues
        self.lam_min = float(vals[0])
        self.lam_max = float(vals[-1])

    @property
    def site_dim(self) -> int:
        return self.h.shape[0]

    @property
    def total_dim(self) -> int:
        return self.site_dim**self.n_sites

    @property
    def spectral_width(self) -> float:
        return self.lam_max - self.lam_min

    def require_nondegenerate(self) -> None:
        if self.spectral_width < DEGENERACY_TOL:
            raise DegenerateSpectrumError("site generator spectrum has zero width")


def total_generator(g: GeneratorSpec, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Dense sum_i h_i with the site generator acting on each subsystem."""
    if g.total_dim > cap:
        raise DimensionOverflowError(f"total dim {g.total_dim} exceeds cap {cap}")
    d, k = g.site_dim, g.n_sites
    out = np.zeros((g.total_dim, g.total_dim), dtype=complex)
    for i in range(k):
        left = np.eye(d**i)
        right = np.eye(d ** (k - 1 - i))
        out += np.kron(np.kron(left, g.h), right)
    return out


# ---------------------------------------------------------------------------
# Shipped channel families
# ---------------------------------------------------------------------------

def identity_channel(dim: int) -> ParamChannel:
    """x-independent channel acting as the identity map."""
    eye = [np.eye(dim, dtype=complex)]
    return ParamChannel(dim=dim, kraus_at=lambda x: eye)


def unitary_channel(g: GeneratorSpec, cap: int = DEFAULT_DIM_CAP) -> ParamChannel:
    """Unitary family with single Kraus operator exp(-i x sum_i h_i)."""
    gen = total_generator(g, cap=cap)

    def kraus_at(x: float) -> list[np.ndarray]:
        return [expm_i_hermitian(gen, x)]

    return ParamChannel(dim=g.total_dim, kraus_at=kraus_at)


def depolarizing_compose(ch: ParamChannel, gamma: float) -> ParamChannel:
    """Mix a channel with the fully depolarizing map.

    The result acts as rho -> (1-gamma) * ch(x)[rho] + gamma * I/dim,
    realized as the union of the scaled Kraus set of ``ch`` and the scaled
    complete depolarizing Kraus set {sqrt(gamma/dim) |i><j|}.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ParameterOutOfRangeError(f"gamma must be in [0, 1], got {gamma}")
    if gamma == 0.0:
        return ch
    d = ch.dim
    scale = np.sqrt(gamma / d)
    depol_ops = []
    for i in range(d):
        for j in range(d):
            op = np.zeros((d, d), dtype=complex)
            op[i, j] = scale
            depol_ops.append(op)
    keep = np.sqrt(1.0 - gamma)

    def kraus_at(x: float) -> list[np.ndarray]:
        if gamma == 1.0:
            return depol_ops
        return [keep * k for k in ch.kraus_at(x)] + depol_ops

    return ParamChannel(dim=d, kraus_at=kraus_at)


# ---------------------------------------------------------------------------
# Application and derivatives
# ---------------------------------------------------------------------------

def apply_raw(ch: ParamChannel, rho: np.ndarray, x: float) -> np.ndarray:
    """sum_j K_j(x) rho K_j(x)^dag without output validation."""
    if rho.shape != (ch.dim, ch.dim):
        raise DimensionMismatchError(
            f"state shape {rho.shape} does not match channel dim {ch.dim}"
        )
    out = np.zeros_like(rho, dtype=complex)
    for k in ch.kraus_at(x):
        out += k @ rho @ k.conj().T
    return out


def apply(ch: ParamChannel, rho: np.ndarray, x: float) -> np.ndarray:
    """Propagate a density matrix through the channel at parameter x."""
    out = apply_raw(ch, rho, x)
    tr = float(np.trace(out).real)
    if abs(tr - 1.0) > CPTP_TRACE_TOL:
        raise CPTPViolationError(f"output trace {tr!r} deviates from 1")
    return as_density_matrix(out, psd_tol=1e-8, trace_tol=CPTP_TRACE_TOL)


def channel_derivative(
    ch: ParamChannel, rho: np.ndarray, x: float, dx: float | None = None
) -> np.ndarray:
    """Central-difference parameter derivative of the propagated state.

    Returns (ch(x+dx)[rho] - ch(x-dx)[rho]) / (2 dx): Hermitian and
    traceless up to round-off for trace-preserving families.
    """
    if dx is None:
        dx = ch.smoothness_step
    if dx < 1e-12:
        raise StepTooSmallError(f"dx = {dx!r} is below 1e-12")
    plus = apply_raw(ch, rho, x + dx)
    minus = apply_raw(ch, rho, x - dx)
    return (plus - minus) / (2.0 * dx)


@dataclass(frozen=True)
class CptpReport:
    """Trace-preservation probe results for a channel."""

    x_probes: tuple[float, ...]
    deviations: tuple[float, ...]  # max-abs of sum_j K_j^dag K_j - I per probe
    tol: float

    @property
    def passed(self) -> bool:
        return all(d < self.tol for d in self.deviations)


def cptp_check(ch: ParamChannel, x_probes, tol: float = 1e-9) -> CptpReport:
    """Probe sum_j K_j(x)^dag K_j(x) = I at each given parameter value."""
    eye = np.eye(ch.dim)
    devs = []
    for x in x_probes:
        acc = np.zeros((ch.dim, ch.dim), dtype=complex)
        for k in ch.kraus_at(float(x)):
            acc += k.conj().T @ k
        devs.append(float(np.max(np.abs(acc - eye))))
    return CptpReport(
        x_probes=tuple(float(x) for x in x_probes),
        deviations=tuple(devs),
        tol=tol,
    )
