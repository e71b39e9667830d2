"""Exception types shared across the package."""


class HeetError(ValueError):
    """A domain rule was violated (bad matrix, mix, trace, config...)."""


class ParseError(HeetError):
    """An input file could not be parsed.

    ``line`` is the 1-based line number of the offending record when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
