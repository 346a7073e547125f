"""Randomized verification of the metric and sensitivity inequalities.

Three standing claims are fuzzed over seeded random instances:

1. Joint convexity of the squared Bures distance,
       d^2(a r1 + (1-a) r2, a s1 + (1-a) s2)
           <= a d^2(r1, s1) + (1-a) d^2(r2, s2)
   ("lemma" suite).

2. The mixed-state no-go bound: the finite-difference QFI of a mixed state
   propagated through a smooth linear channel never exceeds the largest QFI
   among the pure states of any ensemble realizing it ("theorem" suite).
   Each trial also checks the intermediate step: the squared Bures step of
   the propagated mixture is at most the weight-averaged squared Bures step
   of the propagated members.

3. The sensitivity scaling laws 1/sqrt(N K) vs 1/(sqrt(N) K) for product
   and extremal entangled probes (scaling table), plus the behaviour of a
   GHZ state admixed with white noise (werner table, recorded only).

Every randomized quantity is a deterministic function of (master seed,
trial index); trial seeds come from a splitmix64 derivation recorded in
the report so any single failing trial can be reproduced in isolation.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channels import (
    DEFAULT_FD_STEP,
    GeneratorSpec,
    ParamChannel,
    depolarizing_compose,
    unitary_channel,
)
from .errors import ConfigError, IoError
from .linalg import PAULI_Z
from .metrology import (
    bound_entangled,
    bound_product,
    bures_distance_sq,
    delta_x_min,
    fd_bures_sq,
    qfi_from_bures_sq,
)
from .states import (
    Decomposition,
    as_density_matrix,
    density_from_pure,
    extremal_entangled_state,
    get_rng,
    mix,
    product_state,
    random_density,
    random_mixed_decomposition,
)

# Inequality slack for metric (squared-Bures) comparisons.
METRIC_MARGIN_TOL = -1e-10
# Absolute slack for finite-difference QFI comparisons.
QFI_MARGIN_TOL = 1e-8

SEED_DERIVATION = "splitmix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15)"
_MASK64 = (1 << 64) - 1


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Per-trial seed from the master seed via a splitmix64 step."""
    z = (master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def phase_channel(n_sites: int, gamma: float = 0.0) -> ParamChannel:
    """Qubit phase rotation exp(-i x sum_i sigma_z/2), optionally depolarized."""
    ch = unitary_channel(GeneratorSpec(h=0.5 * PAULI_Z, n_sites=n_sites))
    return depolarizing_compose(ch, gamma) if gamma > 0.0 else ch


# ---------------------------------------------------------------------------
# Single-instance checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaTrialResult:
    """One joint-convexity check: margin = rhs - lhs must be >= -1e-10."""

    lhs: float
    rhs: float
    margin: float
    a: float
    dim: int
    seed: int = -1
    trial: int = -1

    @property
    def violated(self) -> bool:
        return self.margin < METRIC_MARGIN_TOL


def check_lemma_once(
    rho1, rho2, sigma1, sigma2, a: float, seed: int = -1, trial: int = -1
) -> LemmaTrialResult:
    """Joint convexity of the squared Bures distance on one quadruple."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"mixing weight a must be in [0, 1], got {a}")
    rho_mix = as_density_matrix(a * rho1 + (1.0 - a) * rho2)
    sigma_mix = as_density_matrix(a * sigma1 + (1.0 - a) * sigma2)
    lhs = bures_distance_sq(rho_mix, sigma_mix)
    rhs = a * bures_distance_sq(rho1, sigma1) + (1.0 - a) * bures_distance_sq(
        rho2, sigma2
    )
    return LemmaTrialResult(
        lhs=lhs, rhs=rhs, margin=rhs - lhs, a=float(a),
        dim=int(rho1.shape[0]), seed=seed, trial=trial,
    )


@dataclass(frozen=True)
class TheoremTrialResult:
    """One mixed-vs-best-pure sensitivity check.

    ``holds`` compares QFI values (qfi_mixed <= max(qfi_pure) + 1e-8),
    which is equivalent to delta_x_mixed >= delta_x_best_pure up to the
    same relative slack but avoids infinities at zero QFI.  chain_margin
    is the intermediate convexity step in squared-Bures units.
    """

    qfi_mixed: float
    qfi_pure: tuple[float, ...]
    delta_x_mixed: float
    delta_x_best_pure: float
    holds: bool
    chain_lhs: float
    chain_rhs: float
    chain_margin: float
    dim: int
    x: float
    seed: int = -1
    trial: int = -1
    gamma: float = 0.0

    @property
    def qfi_best_pure(self) -> float:
        return max(self.qfi_pure)

    @property
    def violated(self) -> bool:
        return (not self.holds) or self.chain_margin < METRIC_MARGIN_TOL


def check_theorem_once(
    d: Decomposition,
    ch: ParamChannel,
    x: float,
    n_repetitions: int = 1,
    dx: float = DEFAULT_FD_STEP,
    seed: int = -1,
    trial: int = -1,
    gamma: float = 0.0,
) -> TheoremTrialResult:
    """Mixed-state bound on one ensemble/channel/parameter instance.

    Propagates the mixture and every ensemble member through the same
    channel and compares finite-difference QFI values at the same step.
    """
    rho_mix = mix(d)
    d2_mix = fd_bures_sq(ch, rho_mix, x, dx)
    qfi_mixed = qfi_from_bures_sq(d2_mix, dx)

    d2_members = []
    qfi_members = []
    for _, psi in d:
        # canonicalize exactly like mix() so a single-term ensemble
        # reproduces the mixture bit for bit
        member = as_density_matrix(density_from_pure(psi))
        d2 = fd_bures_sq(ch, member, x, dx)
        d2_members.append(d2)
        qfi_members.append(qfi_from_bures_sq(d2, dx))

    chain_rhs = float(np.dot(d.weights, d2_members))
    qfi_best = max(qfi_members)
    return TheoremTrialResult(
        qfi_mixed=qfi_mixed,
        qfi_pure=tuple(qfi_members),
        delta_x_mixed=delta_x_min(qfi_mixed, n_repetitions).delta_x_min,
        delta_x_best_pure=delta_x_min(qfi_best, n_repetitions).delta_x_min,
        holds=qfi_mixed <= qfi_best + QFI_MARGIN_TOL,
        chain_lhs=d2_mix,
        chain_rhs=chain_rhs,
        chain_margin=chain_rhs - d2_mix,
        dim=d.dim,
        x=float(x),
        seed=seed,
        trial=trial,
        gamma=float(gamma),
    )


# ---------------------------------------------------------------------------
# Fuzzers
# ---------------------------------------------------------------------------

def fuzz_lemma(
    trials: int, master_seed: int, dims: tuple[int, ...] = (2, 4, 8)
) -> list[LemmaTrialResult]:
    """Joint-convexity trials on random quadruples of mixed ranks."""
    results = []
    for i in range(trials):
        seed = derive_trial_seed(master_seed, i)
        rng = get_rng(seed)
        dim = int(rng.choice(dims))
        a = float(rng.uniform(0.0, 1.0))
        quads = [
            random_density(dim, int(rng.integers(1, dim + 1)), rng)
            for _ in range(4)
        ]
        results.append(
            check_lemma_once(quads[0], quads[1], quads[2], quads[3], a,
                             seed=seed, trial=i)
        )
    return results


def _sites_for_dim(dim: int) -> int:
    k = round(math.log2(dim))
    if 2**k != dim:
        raise ConfigError(f"theorem suite dims must be powers of 2, got {dim}")
    return k


def fuzz_theorem(
    trials: int,
    master_seed: int,
    dims: tuple[int, ...] = (4, 8),
    gammas: tuple[float, ...] = (0.0, 0.1, 0.3),
    n_repetitions: int = 1,
    dx: float = DEFAULT_FD_STEP,
) -> list[TheoremTrialResult]:
    """Mixed-state bound trials on random ensembles under phase channels.

    Each trial draws a rank-2..4 state, re-mixes its spectral ensemble
    through a Haar isometry with up to three extra terms, and probes a
    phase channel (optionally depolarized) at a random parameter value.
    """
    channels = {
        (dim, gamma): phase_channel(_sites_for_dim(dim), gamma)
        for dim in dims
        for gamma in gammas
    }
    results = []
    for i in range(trials):
        seed = derive_trial_seed(master_seed, i)
        rng = get_rng(seed)
        dim = int(rng.choice(dims))
        rank = int(rng.integers(2, min(4, dim) + 1))
        rho0 = random_density(dim, rank, rng)
        decomp = random_mixed_decomposition(rho0, rng)
        gamma = float(rng.choice(gammas))
        x = float(rng.uniform(0.0, 2.0 * math.pi))
        results.append(
            check_theorem_once(
                decomp, channels[(dim, gamma)], x,
                n_repetitions=n_repetitions, dx=dx,
                seed=seed, trial=i, gamma=gamma,
            )
        )
    return results


# ---------------------------------------------------------------------------
# Scaling and admixture experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingRow:
    """Measured vs closed-form sensitivity for one resource count."""

    n_sites: int
    qfi_product: float
    delta_product: float
    delta_product_closed: float
    product_rel_dev: float
    qfi_entangled: float
    delta_entangled: float
    delta_entangled_closed: float
    entangled_rel_dev: float
    ratio: float  # measured delta_entangled / delta_product
    ratio_expected: float  # 1/sqrt(K)


def scaling_experiment(
    h,
    k_max: int,
    n_repetitions: int = 1,
    dx: float = DEFAULT_FD_STEP,
) -> list[ScalingRow]:
    """Sensitivity vs subsystem count for product and entangled probes.

    For each K the product probe is the balanced superposition of the
    extreme generator eigenvectors on every site; the entangled probe is
    the GHZ-type state over those eigenvectors.  Both are propagated with
    the unitary family generated by x * sum_i h_i and measured with the
    finite-difference QFI, next to the closed-form bounds.
    """
    site = extremal_entangled_state(h, 1)
    rows = []
    for k in range(1, k_max + 1):
        g = GeneratorSpec(h=h, n_sites=k)
        ch = unitary_channel(g)
        rho_prod = density_from_pure(product_state(site, k))
        rho_ent = density_from_pure(extremal_entangled_state(h, k))
        qfi_prod = qfi_from_bures_sq(fd_bures_sq(ch, rho_prod, 0.0, dx), dx)
        qfi_ent = qfi_from_bures_sq(fd_bures_sq(ch, rho_ent, 0.0, dx), dx)
        dp = delta_x_min(qfi_prod, n_repetitions).delta_x_min
        de = delta_x_min(qfi_ent, n_repetitions).delta_x_min
        dp_closed = bound_product(g, n_repetitions)
        de_closed = bound_entangled(g, n_repetitions)
        rows.append(
            ScalingRow(
                n_sites=k,
                qfi_product=qfi_prod,
                delta_product=dp,
                delta_product_closed=dp_closed,
                product_rel_dev=(dp - dp_closed) / dp_closed,
                qfi_entangled=qfi_ent,
                delta_entangled=de,
                delta_entangled_closed=de_closed,
                entangled_rel_dev=(de - de_closed) / de_closed,
                ratio=de / dp,
                ratio_expected=1.0 / math.sqrt(k),
            )
        )
    return rows


@dataclass(frozen=True)
class WernerRow:
    """QFI and minimum uncertainty of a noise-admixed GHZ probe."""

    q: float
    qfi: float
    delta_x_min: float


def werner_experiment(
    n_sites: int,
    q_grid,
    n_repetitions: int = 1,
    dx: float = DEFAULT_FD_STEP,
) -> list[WernerRow]:
    """Phase sensitivity of q|GHZ><GHZ| + (1-q) I/2^K across a q grid.

    QFI monotonicity in q is recorded by callers, never asserted: a large
    admixture can open new ensembles of the state and change which pure
    member sets the bound.
    """
    ghz = density_from_pure(extremal_entangled_state(0.5 * PAULI_Z, n_sites))
    dim = ghz.shape[0]
    ch = phase_channel(n_sites)
    eye = np.eye(dim) / dim
    rows = []
    for q in q_grid:
        q = float(q)
        if not 0.0 <= q <= 1.0:
            raise ConfigError(f"q must be in [0, 1], got {q}")
        rho = as_density_matrix(q * ghz + (1.0 - q) * eye)
        qfi = qfi_from_bures_sq(fd_bures_sq(ch, rho, 0.0, dx), dx)
        rows.append(
            WernerRow(q=q, qfi=qfi, delta_x_min=delta_x_min(qfi, n_repetitions).delta_x_min)
        )
    return rows


def qfi_nondecreasing_in_q(rows: list[WernerRow], slack: float = 1e-9) -> bool:
    """Whether QFI grows with the GHZ fraction along the grid (diagnostic)."""
    ordered = sorted(rows, key=lambda r: r.q)
    return all(b.qfi >= a.qfi - slack for a, b in zip(ordered, ordered[1:]))


# ---------------------------------------------------------------------------
# Suite runner
# ---------------------------------------------------------------------------

LEMMA_CSV_COLUMNS = ("trial", "seed", "dim", "lhs", "rhs", "margin")
THEOREM_CSV_COLUMNS = ("trial", "seed", "dim", "qfi_mixed", "qfi_best_pure", "holds")


@dataclass
class SuiteConfig:
    """Configuration of one fuzzing run."""

    suite: str  # "lemma" or "theorem"
    trials: int
    master_seed: int
    dims: tuple[int, ...] = ()
    gammas: tuple[float, ...] = (0.0, 0.1, 0.3)
    dx: float = DEFAULT_FD_STEP
    n_repetitions: int = 1
    invert: bool = False  # self-test: flag satisfied trials instead
    out_json: str | None = None
    out_csv: str | None = None

    def __post_init__(self):
        if self.suite not in ("lemma", "theorem"):
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.dims:
            self.dims = (2, 4, 8) if self.suite == "lemma" else (4, 8)
        if any(d < 2 for d in self.dims):
            raise ConfigError("dims must be >= 2")
        if self.suite == "theorem":
            for d in self.dims:
                _sites_for_dim(d)
            if any(not 0.0 <= g <= 1.0 for g in self.gammas):
                raise ConfigError("gamma values must be in [0, 1]")


@dataclass
class SuiteOutcome:
    """Run result: exit code 0 (clean) or 1 (flagged trials), plus report."""

    exit_code: int
    report: dict
    flagged: int
    results: list = field(default_factory=list)


def _lemma_trial_row(r: LemmaTrialResult, flagged: bool) -> dict:
    return {
        "trial": r.trial,
        "seed": r.seed,
        "dim": r.dim,
        "a": r.a,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "margin": r.margin,
        "flagged": flagged,
    }


def _theorem_trial_row(r: TheoremTrialResult, flagged: bool) -> dict:
    return {
        "trial": r.trial,
        "seed": r.seed,
        "dim": r.dim,
        "x": r.x,
        "gamma": r.gamma,
        "n_terms": len(r.qfi_pure),
        "qfi_mixed": r.qfi_mixed,
        "qfi_pure": list(r.qfi_pure),
        "qfi_best_pure": r.qfi_best_pure,
        "delta_x_mixed": _json_float(r.delta_x_mixed),
        "delta_x_best_pure": _json_float(r.delta_x_best_pure),
        "holds": r.holds,
        "chain_lhs": r.chain_lhs,
        "chain_rhs": r.chain_rhs,
        "chain_margin": r.chain_margin,
        "flagged": flagged,
    }


def _json_float(x: float):
    """Represent non-finite floats as strings so reports stay strict JSON."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def run_suite(config: SuiteConfig) -> SuiteOutcome:
    """Execute a fuzzing suite and write its JSON/CSV reports.

    Exit code 0 means no trial was flagged; 1 means at least one was.
    Reports carry no timestamps, so identical configs produce
    byte-identical files.
    """
    if config.suite == "lemma":
        results = fuzz_lemma(config.trials, config.master_seed, config.dims)
        tolerances = {"metric_margin": METRIC_MARGIN_TOL}
    else:
        results = fuzz_theorem(
            config.trials,
            config.master_seed,
            config.dims,
            config.gammas,
            n_repetitions=config.n_repetitions,
            dx=config.dx,
        )
        tolerances = {
            "qfi_margin": QFI_MARGIN_TOL,
            "metric_margin": METRIC_MARGIN_TOL,
        }

    flags = [r.violated != config.invert for r in results]
    flagged = sum(flags)
    if config.suite == "lemma":
        trial_rows = [_lemma_trial_row(r, f) for r, f in zip(results, flags)]
        summary = {"min_margin": min(r.margin for r in results)}
    else:
        trial_rows = [_theorem_trial_row(r, f) for r, f in zip(results, flags)]
        summary = {
            "min_chain_margin": min(r.chain_margin for r in results),
            "max_qfi_excess": max(r.qfi_mixed - r.qfi_best_pure for r in results),
            "holds_all": all(r.holds for r in results),
        }

    report = {
        "suite": config.suite,
        "config": {
            "trials": config.trials,
            "master_seed": config.master_seed,
            "dims": list(config.dims),
            "gammas": list(config.gammas) if config.suite == "theorem" else None,
            "dx": config.dx,
            "n_repetitions": config.n_repetitions,
            "invert": config.invert,
        },
        "seed_derivation": SEED_DERIVATION,
        "tolerances": tolerances,
        "summary": summary,
        "flagged": flagged,
        "trials": trial_rows,
    }

    if config.out_json:
        write_json_report(report, config.out_json)
    if config.out_csv:
        write_csv_summary(results, config.suite, config.out_csv)

    return SuiteOutcome(
        exit_code=1 if flagged else 0, report=report, flagged=flagged, results=results
    )


def write_json_report(report: dict, path) -> None:
    """Deterministic JSON dump: sorted keys, no timestamps."""
    try:
        text = json.dumps(report, sort_keys=True, indent=2, allow_nan=False)
        Path(path).write_text(text + "\n", encoding="utf-8")
    except (OSError, ValueError) as exc:
        raise IoError(f"cannot write JSON report to {path}: {exc}") from exc


def write_csv_summary(results, suite: str, path) -> None:
    """Fixed-column CSV summary of a fuzzing run."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            if suite == "lemma":
                writer.writerow(LEMMA_CSV_COLUMNS)
                for r in results:
                    writer.writerow([r.trial, r.seed, r.dim, repr(r.lhs), repr(r.rhs), repr(r.margin)])
            else:
                writer.writerow(THEOREM_CSV_COLUMNS)
                for r in results:
                    writer.writerow(
                        [r.trial, r.seed, r.dim, repr(r.qfi_mixed), repr(r.qfi_best_pure), r.holds]
                    )
    except OSError as exc:
        raise IoError(f"cannot write CSV summary to {path}: {exc}") from exc


def write_scaling_csv(rows: list[ScalingRow], path) -> None:
    """Delimited scaling table with measured and closed-form columns."""
    cols = (
        "n_sites", "qfi_product", "delta_product", "delta_product_closed",
        "product_rel_dev", "qfi_entangled", "delta_entangled",
        "delta_entangled_closed", "entangled_rel_dev", "ratio", "ratio_expected",
    )
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(cols)
            for r in rows:
                writer.writerow(
                    [r.n_sites] + [repr(getattr(r, c)) for c in cols[1:]]
                )
    except OSError as exc:
        raise IoError(f"cannot write scaling CSV to {path}: {exc}") from exc


def write_werner_csv(rows: list[WernerRow], path) -> None:
    """Delimited admixture table: q, qfi, delta_x_min."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(("q", "qfi", "delta_x_min"))
            for r in rows:
                writer.writerow([repr(r.q), repr(r.qfi), repr(r.delta_x_min)])
    except OSError as exc:
        raise IoError(f"cannot write werner CSV to {path}: {exc}") from exc
