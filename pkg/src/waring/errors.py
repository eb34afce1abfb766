"""Exception types shared across the package.

Each class carries the CLI exit code it maps to, so the command-line
front end can translate failures uniformly.
"""


class WaringError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 3


class ParseError(WaringError):
    """Malformed polynomial expression or bad command usage."""

    exit_code = 1

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class InvalidInputError(WaringError):
    """Well-formed but semantically inadmissible input.

    Covers non-homogeneous expressions, degree mismatches, the zero form
    where it is forbidden, and out-of-range arguments.
    """

    exit_code = 2


class BadPrimeError(InvalidInputError):
    """A modular reduction hit a denominator divisible by the prime."""


class VerificationError(WaringError):
    """An internal exactness, residual, or uniqueness invariant failed."""

    exit_code = 3


class NumericError(WaringError):
    """An iterative numeric procedure did not converge within budget."""

    exit_code = 4


class SamplingError(NumericError):
    """A randomized search exhausted its retry budget."""
