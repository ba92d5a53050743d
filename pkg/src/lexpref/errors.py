"""Exception types shared across the package."""


class LexPrefError(Exception):
    """Base class for all package-specific errors."""


class ParseError(LexPrefError):
    """Raised on malformed instance files; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InconsistentError(LexPrefError):
    """Raised by operations whose contract requires a consistent statement set."""


class UnsupportedQueryError(LexPrefError):
    """Raised for inference queries whose negation cannot be expressed."""


class CapExceededError(LexPrefError):
    """Raised when an exhaustive enumeration would exceed its configured cap."""
