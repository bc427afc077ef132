"""Exception hierarchy. The CLI maps these onto exit codes:

usage/parameter problems -> 1, data/format problems -> 2, numeric problems -> 3.
"""


class TexstegoError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(TexstegoError):
    """Bad invocation: unknown verb, missing flag, invalid option value."""


class ParameterError(UsageError):
    """A parameter value is out of its valid range (e.g. alpha <= 0)."""


class DataError(TexstegoError):
    """Problem with input data or files."""


class FormatError(DataError):
    """A container file violates its declared layout."""


class BadMagicError(FormatError):
    """File does not start with the expected magic tag."""


class TruncatedFileError(FormatError):
    """File ends before its declared payload does."""


class DimensionError(DataError):
    """Declared or required dimensions are invalid (zero rows, odd size, ...)."""


class ShapeError(DataError):
    """Two operands have incompatible shapes."""


class MetadataError(DataError):
    """Packing metadata is internally inconsistent."""


class KeyFieldError(FormatError):
    """An extraction key is missing fields or carries invalid ones."""


class PeakMismatchError(DataError):
    """Two images declare different peak sample values."""


class FileAccessError(DataError):
    """An OS-level read/write failed; message carries the path."""


class NumericError(TexstegoError):
    """Numeric computation cannot proceed (non-finite input, ...)."""


class ConvergenceError(NumericError):
    """Iterative fit did not converge; carries the iteration count."""

    def __init__(self, message, iterations):
        super().__init__(message)
        self.iterations = iterations
