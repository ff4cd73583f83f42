"""Exception types shared across the package."""


class OtsenseError(Exception):
    """Base class for every error raised by this package."""


class DataError(OtsenseError):
    """Invalid or degenerate input data: bad shapes, non-finite values,
    constant columns, mismatched sample sizes, malformed files."""


class NumericalError(OtsenseError):
    """A numerical procedure failed: kernel underflow, exhausted iteration
    budget where a result cannot be returned, loss of positive
    semi-definiteness beyond tolerance, non-finite model state."""
