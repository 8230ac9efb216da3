"""Exception types shared by the engines."""


class UnstableInput(ValueError):
    """Raised when 2g - 2 + n <= 0."""


class ConsistencyError(ArithmeticError):
    """Raised when exact data fails a self-consistency check.

    Interpolation raises it when an extra sample falls off the fitted
    polynomial; the integral table raises it on a conflicting rewrite.
    """


class InvalidModulus(ValueError):
    pass


class UnsupportedGenus(ValueError):
    pass


class UnsupportedTarget(ValueError):
    pass


class ValidationError(ValueError):
    pass


class TruncationError(ValueError):
    """A series coefficient beyond the supplied truncation order was needed."""


class CacheParseError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
