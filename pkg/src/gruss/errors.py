"""Exception hierarchy shared by every module in the package."""


class GrussError(Exception):
    """Base class for all package errors."""


class DomainError(GrussError, ValueError):
    """Input outside an operation's domain (shape mismatch, non-PSD, ...)."""


class PreconditionError(GrussError, ValueError):
    """A mathematical hypothesis of a check is not satisfied by the instance."""


class NumericalFailure(GrussError, ArithmeticError):
    """An eigen- or singular-value solver did not converge."""


class SingularKernelError(DomainError):
    """The closed-form Fourier kernel sum divides by a near-zero sine."""


class GenerationError(GrussError, RuntimeError):
    """A random generator could not satisfy its hypotheses within the retry limit."""


class UsageError(GrussError, ValueError):
    """Bad arguments to a driver routine (unknown variant, empty campaign, ...)."""


class RangeError(GrussError, OverflowError):
    """An exact integer result does not fit the requested numeric type."""
