"""Exception hierarchy shared by all hardyscale modules."""


class HardyError(Exception):
    """Base class for all library errors."""


class InvalidInputError(HardyError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(HardyError, ValueError):
    """Evaluation requested at (or too close to) a pole or outside a domain."""


class NumericalFailureError(HardyError, ArithmeticError):
    """A numerical sub-step (root solve, bisection, consistency check) failed."""


class IllConditionedError(InvalidInputError):
    """Input is too degenerate for the FFT-based factorization."""


class ResourceError(HardyError):
    """Requested object would exceed a configured size cap."""


class RenderError(HardyError):
    """Too many pixels failed to evaluate during a render."""
