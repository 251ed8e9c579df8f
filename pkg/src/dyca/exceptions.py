"""Exception hierarchy shared by all dyca modules."""


class DycaError(Exception):
    """Base class for every error raised by this package."""


# linalg
class NotPositiveDefinite(DycaError, ValueError):
    pass


class DimensionMismatch(DycaError, ValueError):
    pass


class NoConvergence(DycaError, RuntimeError):
    pass


class EmptyInput(DycaError, ValueError):
    pass


# signal
class TooShort(DycaError, ValueError):
    pass


class WindowTooLong(DycaError, ValueError):
    pass


class InvalidBand(DycaError, ValueError):
    pass


# core
class Singular(DycaError, ValueError):
    """Correlation matrices stay non-positive-definite after maximal ridge."""


class NoComponents(DycaError, ValueError):
    """No generalized eigenvalue clears the requested threshold."""


class SingularGram(DycaError, ValueError):
    pass


class DegenerateU(DycaError, ValueError):
    pass


# baselines
class KTooLarge(DycaError, ValueError):
    pass


# dynsys
class StepFailure(DycaError, RuntimeError):
    pass


# io
class ParseError(DycaError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RaggedRows(ParseError):
    pass


class NonFinite(ParseError):
    pass


class UnknownKey(DycaError, KeyError):
    def __init__(self, key):
        self.key = key
        super().__init__(key)

    def __str__(self):
        return f"unknown config key {self.key!r}"


class BadValue(DycaError, ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
