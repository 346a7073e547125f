"""Sensitivity bounds for quantum parameter estimation with mixed states.

Core pieces: dense Hermitian linear algebra, state/ensemble construction,
smoothly parametrized Kraus channels, Bures-distance-based quantum Fisher
information, and randomized verification suites for the convexity and
mixed-state-bound inequalities.
"""

__version__ = "0.1.0"

from .channels import (
    CptpReport,
    GeneratorSpec,
    ParamChannel,
    apply,
    channel_derivative,
    cptp_check,
    depolarizing_compose,
    identity_channel,
    total_generator,
    unitary_channel,
)
from .errors import (
    ConfigError,
    CPTPViolationError,
    DegenerateSpectrumError,
    DimensionMismatchError,
    DimensionOverflowError,
    IoError,
    NotHermitianError,
    NotIsometryError,
    NotNormalizedError,
    NotPSDError,
    NotTracelessError,
    NumericalFailureError,
    ParameterOutOfRangeError,
    QSenseError,
    StepOutOfRangeError,
    StepTooSmallError,
    WeightMismatchError,
)
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    EigenSystem,
    eigh,
    expm_i_hermitian,
    sqrt_psd,
    tensor,
    trace_norm,
)
from .metrology import (
    SensitivityReport,
    bound_entangled,
    bound_product,
    bures_distance_sq,
    delta_x_min,
    fd_bures_sq,
    fidelity,
    qfi_fd,
    qfi_sld,
)
from .states import (
    Decomposition,
    as_density_matrix,
    as_pure_state,
    density_from_pure,
    eigen_decomposition,
    extremal_entangled_state,
    haar_unitary,
    mix,
    product_state,
    random_density,
    random_hermitian,
    random_mixed_decomposition,
    random_pure,
    reduced_state,
    unitary_mixed_decomposition,
)
from .verify import (
    LemmaTrialResult,
    ScalingRow,
    SuiteConfig,
    SuiteOutcome,
    TheoremTrialResult,
    WernerRow,
    check_lemma_once,
    check_theorem_once,
    derive_trial_seed,
    fuzz_lemma,
    fuzz_theorem,
    phase_channel,
    run_suite,
    scaling_experiment,
    werner_experiment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
