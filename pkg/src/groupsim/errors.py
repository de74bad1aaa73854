"""Exception types shared across the package."""


class GroupsimError(Exception):
    """Base class for errors raised by this package."""


class EmbeddingFormatError(GroupsimError, ValueError):
    """Raised when an embedding, frequency, or pair file cannot be parsed."""


class DegenerateCurvatureError(GroupsimError, ArithmeticError):
    """Raised when an observed-information diagonal entry underflows.

    Callers that can tolerate this may retry with the parameter-count
    penalty (AIC) instead of the gradient-based one.
    """
