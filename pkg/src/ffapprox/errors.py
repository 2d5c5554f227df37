"""Exception types shared across the package.

Each one maps onto a CLI exit code (see ``cli.EXIT_CODES``).
"""


class FFApproxError(Exception):
    """Base class."""


class MalformedInput(FFApproxError, ValueError):
    """Input could not be parsed or has the wrong shape."""


class PreconditionError(FFApproxError, ValueError):
    """An operation was called outside its domain."""


class BudgetExceeded(FFApproxError):
    """An enumeration or cell count went over the configured cap."""


class PrecisionExhausted(FFApproxError, ArithmeticError):
    """The answer depends on Laurent coefficients that are not known."""


class YTooSmall(PreconditionError):
    """The transference construction produced the zero vector."""


class HorizonInsufficient(FFApproxError):
    """A finite prefix is too short to exhibit the requested structure."""
