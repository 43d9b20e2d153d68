"""Exception hierarchy.

Two families matter to callers: :class:`InputError` covers bad arguments or
malformed files, :class:`NumericalFailure` covers problems that are
mathematically or numerically infeasible for otherwise valid input.
"""


class ClosenessError(Exception):
    """Base class for every error raised by this package."""


class InputError(ClosenessError, ValueError):
    """Invalid argument, precondition violation or malformed input."""


class NumericalFailure(ClosenessError, ArithmeticError):
    """A valid request that cannot be completed numerically."""


class ZeroVectorError(InputError):
    pass


class DimensionError(InputError):
    pass


class DomainError(InputError):
    pass


class ThresholdRangeError(InputError):
    pass


class NonHermitianError(InputError):
    pass


class EmptyInputError(InputError):
    pass


class PreconditionError(InputError):
    pass


class FamilyVerificationError(InputError):
    """A perturbed family member landed on the wrong side of the threshold."""


class FormatError(InputError):
    """Malformed text input. ``lineno`` is 1-based, or None if not line specific."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class SizeCapError(NumericalFailure):
    pass


class EpsilonSearchError(NumericalFailure):
    pass


class RegionSamplingError(NumericalFailure):
    pass
