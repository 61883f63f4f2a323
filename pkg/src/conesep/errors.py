"""Exception hierarchy shared by every module."""


class ConeSepError(Exception):
    """Base class for all errors raised by conesep."""


class InputError(ConeSepError, ValueError):
    """Malformed input: dimension mismatch, zero generator, bad scene."""


class NumericalFailure(ConeSepError, RuntimeError):
    """An iterative routine or LP did not reach its tolerance."""


class UnsupportedScale(ConeSepError):
    """Problem exceeds the desk-scale limits of an exact routine."""


class NoPositivePair(ConeSepError):
    """No pair (x*, alpha) with alpha > 0 exists for the given functional."""


class DegenerateCone(ConeSepError):
    """A Bishop-Phelps cone has empty interior (dual norm of x* <= alpha)."""


class ZeroInBase(ConeSepError):
    """The origin lies in the closed hull of the norm-base of a cone."""
