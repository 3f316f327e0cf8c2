"""Exception types shared across the package."""


class StemkitError(Exception):
    """Base class for errors raised by stemkit."""


class ResourceLimitError(StemkitError):
    """A basis in some bidegree outgrew the configured dimension budget."""

    def __init__(self, message: str, last_completed: tuple[int, int] | None = None):
        super().__init__(message)
        self.last_completed = last_completed


class ChartFormatError(StemkitError, ValueError):
    """Requested chart format is not supported."""


class StemTableError(StemkitError, ValueError):
    """Malformed stems table document."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ParseError(StemkitError, ValueError):
    """Unparseable algebra expression."""


class StemRangeError(StemkitError, ValueError):
    """Requested stem lies outside the tabulated range."""
