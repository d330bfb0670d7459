"""Exception hierarchy for the package."""


class HilbertOpError(Exception):
    """Base class for all package errors."""


class DomainError(HilbertOpError, ValueError):
    """An argument lies outside the domain of a function."""


class ContractViolation(HilbertOpError, ValueError):
    """A call does not satisfy the operation's preconditions."""


class DivergentIntegral(HilbertOpError, ArithmeticError):
    """The requested improper integral is +inf."""


class DivergentSeries(HilbertOpError, ArithmeticError):
    """The requested series is +inf."""


class InternalInconsistency(HilbertOpError, RuntimeError):
    """A certified lower bound exceeded a certified upper bound.

    This always indicates a bug, never a property of the input.
    """
