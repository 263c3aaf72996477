"""Exception types shared across the package."""


class ChiraltorError(Exception):
    """Base class for all errors raised by this package."""


class NonSquare(ChiraltorError):
    """A square matrix was required."""


class ThresholdOnSpectrum(ChiraltorError):
    """The spectral threshold is too close to an eigenvalue modulus.

    Carries the offending threshold and the nearest eigenvalue moduli so
    the caller can pick a better threshold.
    """

    def __init__(self, threshold, nearest):
        self.threshold = float(threshold)
        self.nearest = [float(x) for x in nearest]
        super().__init__(
            f"threshold {self.threshold!r} is within the gap tolerance of the "
            f"spectrum; nearest eigenvalue moduli: {self.nearest}"
        )


class DegreeMismatch(ChiraltorError):
    """Wedge elements of different degrees were paired."""


class SingularBasis(ChiraltorError):
    """The vectors of a dual wedge element are linearly dependent."""


class FrameMismatch(ChiraltorError):
    """A cohomology frame is inconsistent with the complex at hand."""


class NotAcyclic(ChiraltorError):
    """An operation requiring vanishing cohomology received a non-acyclic complex."""


class BNotInvertible(ChiraltorError):
    """The signature operator is not invertible."""


class UnrealizableSpec(ChiraltorError):
    """A random-model specification has no realization."""
