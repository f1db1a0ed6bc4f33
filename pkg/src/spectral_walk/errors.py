"""Exception hierarchy shared by all modules."""


class SpectralWalkError(Exception):
    """Base class for all library errors."""


class DomainError(SpectralWalkError, ValueError):
    """A mathematical precondition on input values is violated.

    Raised e.g. for a nonpositive birth rate where positivity is required,
    or an elliptic modulus outside (0, 1). Messages name the offending
    index or field.
    """


class UsageError(SpectralWalkError, ValueError):
    """The call itself is malformed: mismatched objects, empty input,
    size above a configured cap, unnormalized measure."""


class NumericError(SpectralWalkError, RuntimeError):
    """A numerical procedure failed to converge or lost validity."""


class ConfigurationError(SpectralWalkError, ValueError):
    """A truncation/tolerance configuration cannot be satisfied; the
    message suggests how to widen it."""
