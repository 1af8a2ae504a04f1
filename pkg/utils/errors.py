"""Exception hierarchy shared by every package.

Each error also derives from the closest builtin so callers can catch
``ValueError`` and friends without importing this module.
"""


class QMCError(Exception):
    """Base class for all errors raised by this repository."""


class InvalidBaseError(QMCError, ValueError):
    """Base < 2, non-coprime bases or a constant base polynomial."""


class InvalidInputError(QMCError, ValueError):
    """A precondition of an operation is violated."""


class ModulusMismatchError(QMCError, ValueError):
    """Polynomials over different prime fields were combined."""


class PolynomialDivisionError(QMCError, ZeroDivisionError):
    """Division by the zero polynomial."""


class TruncationError(QMCError, ValueError):
    """An index has more digits than a truncated generating matrix has columns."""


class ResourceCapError(QMCError, RuntimeError):
    """A configured resource cap would be exceeded."""


class CertificateInvalidError(QMCError, AssertionError):
    """A certified bound failed. Signals an implementation defect."""


class OutputWriteError(QMCError, OSError):
    """An output file or its directory could not be written."""
