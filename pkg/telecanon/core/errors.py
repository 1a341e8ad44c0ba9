# core/errors.py - Exception hierarchy for channel construction, extraction and protocol runs


class TelecanonError(Exception):
    """Base class for every error raised by telecanon"""


class LabelCollisionError(TelecanonError, ValueError):
    """Two states sharing a qubit label were combined"""


class LabelMismatchError(TelecanonError, ValueError):
    """Qubit labels do not line up with what the operation expects"""


class NotNormalizedError(TelecanonError, ValueError):
    """A state that must be normalized is not"""


class InvalidParamsError(TelecanonError, ValueError):
    """Canonical-form parameters violate their square constraints"""


class NotHalfNormedError(TelecanonError, ValueError):
    """Completion vector does not have squared norm 1/2"""


class InvalidDensityMatrixError(TelecanonError, ValueError):
    """Matrix is not Hermitian, unit-trace and positive within tolerance"""


class MalformedBasisError(TelecanonError, ValueError):
    """Measurement basis has the wrong size, labels or is not orthonormal"""


class NonFiniteError(TelecanonError, ValueError):
    """Amplitudes or matrix entries include NaN or infinity"""


class EmptyBatchError(TelecanonError, ValueError):
    """A batch was requested with no inputs"""


class ConfigError(TelecanonError, ValueError):
    """Run configuration file or flags are unusable"""


class NotPerfectError(TelecanonError):
    """Operation needs a channel certified for perfect teleportation"""


class SampledZeroOutcomeError(TelecanonError):
    """Sampler selected an outcome whose transformation operator is zero"""
