"""Exception types raised across fockmix."""


class FockmixError(Exception):
    """Base class for all library errors."""


class CutoffExceeded(FockmixError):
    """A photon number does not fit inside the truncated Fock grid."""


class CutoffMismatch(FockmixError):
    """Two states live on grids with different cutoffs."""


class OracleLimitExceeded(FockmixError):
    """The matrix-exponential cross-check was asked for too large a sector."""


class TruncationTooLossy(FockmixError):
    """A truncated state lost too much probability mass to be sampled."""


class ConfigInvalid(FockmixError):
    """A scenario or sweep document failed validation.

    ``field`` names the offending key when one can be identified.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field
