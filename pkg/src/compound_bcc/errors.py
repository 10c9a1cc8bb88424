"""Exception types shared across the package.

Every failure mode that callers are expected to distinguish gets its own
class; plain ValueError is reserved for malformed arguments that indicate
a programming error at the call site.
"""


class CompoundBccError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(CompoundBccError, ValueError):
    """Raised when a numerical routine receives non-finite or malformed input."""


class NotHermitianError(CompoundBccError, ValueError):
    """Raised when a matrix fails the Hermitian residual check."""


class NotPositiveDefiniteError(CompoundBccError, ValueError):
    """Raised when a Cholesky factorization fails.

    Attributes
    ----------
    minor : int
        1-based index of the first leading minor that is not positive.
    """

    def __init__(self, minor, message=None):
        self.minor = int(minor)
        if message is None:
            message = (
                "matrix is not positive definite: leading minor of order "
                f"{self.minor} is not positive"
            )
        super().__init__(message)


class FeasibilityError(CompoundBccError, ValueError):
    """Raised when requested stream counts violate the null-space bounds."""


class ConstructionError(CompoundBccError, RuntimeError):
    """Raised when a built beamformer fails its numerical certificates."""


class GenerationError(CompoundBccError, RuntimeError):
    """Raised when channel generation exhausts its resampling budget."""


class ChannelFormatError(CompoundBccError, ValueError):
    """Raised when a channel file cannot be parsed; names the offending field."""


class InvalidGridError(CompoundBccError, ValueError):
    """Raised when an SNR grid is unusable for slope estimation."""


class DegenerateBlockError(CompoundBccError, RuntimeError):
    """Raised when a fading block has no usable zero-forcing beamformer."""


class DimensionMismatchError(CompoundBccError, ValueError):
    """Raised when two rate regions of different dimension are compared."""


class ConfigError(CompoundBccError, ValueError):
    """Raised when an experiment configuration is invalid."""
