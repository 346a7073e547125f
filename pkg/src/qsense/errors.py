"""Exception types raised by the qsense library."""


class QSenseError(Exception):
    """Base class for all qsense errors."""


class NotHermitianError(QSenseError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NotPSDError(QSenseError):
    """Matrix has an eigenvalue below the negative-dust tolerance."""


class NotNormalizedError(QSenseError):
    """State vector norm deviates from 1 beyond tolerance."""


class NotTracelessError(QSenseError):
    """Matrix trace deviates from 0 beyond tolerance."""


class NotIsometryError(QSenseError):
    """Mixing matrix columns are not orthonormal within tolerance."""


class WeightMismatchError(QSenseError):
    """Ensemble weights do not sum to 1 within tolerance."""


class DegenerateSpectrumError(QSenseError):
    """Largest and smallest eigenvalues coincide; extremal construction undefined."""


class DimensionMismatchError(QSenseError):
    """Operands have incompatible dimensions."""


class DimensionOverflowError(QSenseError):
    """Requested tensor dimension exceeds the configured cap."""


class CPTPViolationError(QSenseError):
    """Channel output trace deviates from 1 beyond tolerance."""


class ParameterOutOfRangeError(QSenseError):
    """Scalar parameter lies outside its allowed interval."""


class StepTooSmallError(QSenseError):
    """Finite-difference step is below the numerically meaningful floor."""


class StepOutOfRangeError(QSenseError):
    """Finite-difference step lies outside the supported interval."""


class NumericalFailureError(QSenseError):
    """An underlying numerical routine failed to converge."""


class ConfigError(QSenseError):
    """Invalid suite or CLI configuration."""


class IoError(QSenseError):
    """Report or input file could not be read or written."""
