"""Exception types raised across the package."""


class CrimewaveError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidDimensionError(CrimewaveError, ValueError):
    pass


class NonFiniteFieldError(CrimewaveError, ValueError):
    pass


class InvalidExponentError(CrimewaveError, ValueError):
    pass


class InvalidSigmaError(CrimewaveError, ValueError):
    pass


class InvalidParameterError(CrimewaveError, ValueError):
    pass


class InvalidGridPairError(CrimewaveError, ValueError):
    pass


class NegativeSourceError(CrimewaveError, ValueError):
    pass


class NoSteadyStateError(CrimewaveError, ValueError):
    pass


class NegativeDensityError(CrimewaveError, ValueError):
    pass


class DegenerateDiffusionError(CrimewaveError, ValueError):
    """Degenerate nonlinear diffusion requested without a positive regularization."""


class NonpositiveAttractivenessError(CrimewaveError, ValueError):
    pass


class DtUnderflowError(CrimewaveError, RuntimeError):
    pass


class EmptyRecordError(CrimewaveError, ValueError):
    pass


class InsufficientRowsError(CrimewaveError, ValueError):
    pass


class UnsupportedTestFunctionError(CrimewaveError, ValueError):
    pass


class SnapshotFormatError(CrimewaveError, ValueError):
    """Base for snapshot file format violations."""


class MagicMismatchError(SnapshotFormatError):
    pass


class TruncationError(SnapshotFormatError):
    pass


class DimensionMismatchError(SnapshotFormatError):
    pass


class ScenarioParseError(CrimewaveError, ValueError):
    """Scenario file could not be parsed; message carries the line number."""


class ScenarioValidationError(CrimewaveError, ValueError):
    """Scenario parsed but a field is missing, unknown, or out of range."""
