"""Exception hierarchy.

Every domain violation surfaces as a typed error; nothing is allowed to
degrade into NaN or a silently wrong branch.
"""


class ZetaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ZetaError, ValueError):
    pass


class PoleError(DomainError):
    pass


class GammaOverflowError(ZetaError, OverflowError):
    pass


class PrecisionError(ZetaError, ArithmeticError):
    """An internal error estimate exceeded the requested target."""


class NearZeroError(DomainError):
    pass


class PathThroughZeroError(DomainError):
    pass


# zero tables


class MissedZeroSuspected(ZetaError):
    pass


class ParseError(ZetaError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class OrderError(ZetaError, ValueError):
    pass


class SanityError(ZetaError, ValueError):
    pass


class HeightExceededError(DomainError):
    pass


class CParameterError(DomainError):
    pass


class TableTooShortError(DomainError):
    pass


# explicit formula / quadrature


class CutoffOverflowError(DomainError):
    pass


class QuadratureError(ZetaError, ArithmeticError):
    pass


# primes


class LimitError(DomainError):
    pass


class CutoffError(DomainError):
    pass


# cli / scans


class ConfigError(ZetaError, ValueError):
    pass


class IoError(ZetaError, OSError):
    pass
