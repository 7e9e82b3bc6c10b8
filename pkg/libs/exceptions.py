"""
Error types raised by the election libraries.

Every input problem is an ElectionError (a ValueError), so callers that only
care about "bad input" can catch ValueError. Resource caps are a separate
RuntimeError because the input may be perfectly valid.
"""


class ElectionError(ValueError):
    """Invalid election, instance or solver precondition."""


class InvalidAxisError(ElectionError):
    """Axis is not a permutation of the candidates or the ballots violate it."""

    def __init__(self, message="Invalid societal linear order"):
        super().__init__(message)


class NotSinglePeakedError(ElectionError):
    """No societal axis exists for a profile whose axis had to be discovered."""


class ElectionFileError(ElectionError):
    """Parse diagnostic with a 1-based line and column."""

    def __init__(self, message, line, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ResourceLimitError(RuntimeError):
    """An exhaustive or exact search would exceed a configured cap."""
