"""Exception types raised across the package."""


class JlipError(Exception):
    """Base class for all package errors."""


class DomainViolation(JlipError, ValueError):
    """A point lies outside the domain an operation was asked to work in."""


class PoleError(JlipError, ArithmeticError):
    """A map was evaluated at (or numerically on top of) its pole."""


class ParameterError(JlipError, ValueError):
    """A parameter is outside the range where an operation is defined."""


class CertificateViolation(JlipError):
    """A supremum estimate exceeded a certified upper bound."""
