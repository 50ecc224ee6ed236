"""Exception hierarchy shared by the library and the command-line front end."""


class DrivenSpinError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DrivenSpinError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class DegenerateBasisError(DomainError):
    """The self-Hamiltonian vanishes, so its eigenbasis is undefined."""


class RangeError(DrivenSpinError, ValueError):
    """A value cannot be represented in 64-bit floating point."""


class TruncationError(DrivenSpinError, RuntimeError):
    """An adaptive cutoff could not reach the requested tolerance."""


class NumericalValidityError(DrivenSpinError, ArithmeticError):
    """A computed quantity violates a physical bound beyond roundoff."""


class OracleError(DrivenSpinError, RuntimeError):
    """A reference computation failed to converge."""


class UsageError(DrivenSpinError, ValueError):
    """Invalid user-facing configuration or arguments."""
