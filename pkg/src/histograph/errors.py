"""Exception types shared across the package."""


class HistographError(Exception):
    """Base class for all data errors raised by histograph."""


class ParseError(HistographError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(HistographError):
    """A collection document does not match the expected layout."""


class InsufficientDataError(HistographError):
    pass


class ParseWarning(UserWarning):
    """Non-fatal problem in an export file (e.g. a record without PY)."""
