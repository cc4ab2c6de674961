"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of a computation.

    Examples are a weight divisible by ``p``, a non-prime group order, or a
    fixed-point group type that cannot occur for the given prime.
    """


class ConsistencyError(ArithmeticError):
    """Two independent computation paths disagreed.

    This always indicates a bug, never bad input.
    """


class InputFormatError(DomainError):
    """A text input (data file, graph file) could not be parsed."""
