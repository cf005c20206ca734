"""Exception hierarchy."""


class ModelSpaceLabError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateInputError(ModelSpaceLabError, ValueError):
    """Input is degenerate (zero polynomial, division by zero function, ...)."""


class NumericalFailure(ModelSpaceLabError):
    """An iteration failed to converge.

    ``best`` carries the best iterate found so far.
    """

    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


class NotFactorableError(ModelSpaceLabError, ValueError):
    """Trigonometric polynomial is not strictly positive on the circle."""

    def __init__(self, msg, angle=None):
        super().__init__(msg)
        self.angle = angle


class PoleError(ModelSpaceLabError, ValueError):
    """Evaluation at (or too near) a pole."""


class DivisibilityError(ModelSpaceLabError, ValueError):
    """Inner function is not a divisor; ``unmatched`` lists offending zeros."""

    def __init__(self, msg, unmatched=()):
        super().__init__(msg)
        self.unmatched = list(unmatched)


class BoundaryZeroError(ModelSpaceLabError, ValueError):
    """A zero or pole lies on the unit circle."""


class NotInH2Error(ModelSpaceLabError, ValueError):
    """Function has a pole in the closed unit disk."""


class OutOfDiskError(ModelSpaceLabError, ValueError):
    pass


class InterpolationError(ModelSpaceLabError, ValueError):
    pass


class NearPoleError(ModelSpaceLabError):
    """Denominator of a rational function is numerically singular at T."""


class NotApplicableError(ModelSpaceLabError):
    """chi(T) is not injective, so phi(T) is undefined.

    ``common_zeros`` names the zeros of chi shared with the spectrum of T.
    """

    def __init__(self, msg, common_zeros=()):
        super().__init__(msg)
        self.common_zeros = list(common_zeros)


class NotC0Error(ModelSpaceLabError, ValueError):
    pass


class InvalidInputError(ModelSpaceLabError, ValueError):
    pass


class MatchFailure(ModelSpaceLabError):
    """A bicommutant element is not matched by a polynomial in T."""

    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class SpanningFailure(ModelSpaceLabError):
    pass


class WitnessFailure(ModelSpaceLabError):
    """Randomized search found no invertible intertwiner (inconclusive)."""
