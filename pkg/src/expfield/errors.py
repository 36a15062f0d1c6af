class ExpFieldError(Exception):
    pass


class DomainError(ExpFieldError, ValueError):
    """Argument lies outside the convergence disc of a series."""


class PrecisionExhausted(ExpFieldError, ArithmeticError):
    """Not enough known digits to produce the requested result."""


class DivisionByIndistinguishableZero(ExpFieldError, ZeroDivisionError):
    pass


class InsufficientTruncation(ExpFieldError, ValueError):
    """A truncated linear system has fewer constraints than unknowns."""


class BoxTooLarge(ExpFieldError, ValueError):
    pass


class ParseError(ExpFieldError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
