"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument falls outside the domain where an operation is defined."""


class UnsupportedOperationError(TypeError):
    """The operation needs structure the model lacks (e.g. densities of a discrete law)."""


class NotApplicableError(ValueError):
    """A curve family is requested for a model that does not satisfy its ordering."""


class UndefinedPrecisionError(ArithmeticError):
    """Precision has an empty denominator at the requested point."""


class DegenerateLimitError(ArithmeticError):
    """The pointwise asymptotic variance is zero; standardizing is meaningless."""


class UnboundedVarianceError(ArithmeticError):
    """The pointwise asymptotic variance is infinite."""
