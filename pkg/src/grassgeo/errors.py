"""Exception hierarchy shared by all grassgeo modules."""


class GrassgeoError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(GrassgeoError):
    """Malformed input: non-finite entries, dimension or context mismatch."""


class NotHermitian(GrassgeoError):
    """A Hermitian matrix was required."""


class DomainError(GrassgeoError):
    """A scalar function is undefined at an eigenvalue of its argument."""


class BranchCut(GrassgeoError):
    """Principal logarithm requested within tolerance of the branch cut."""


class NotPositive(GrassgeoError):
    """A positive definite matrix was required."""


class NotInLp(GrassgeoError):
    """The element does not represent a point of the projective space."""


class NotInvertible(GrassgeoError):
    """An invertible matrix was required."""


class InvalidTangent(GrassgeoError):
    """Tangent vector is not anti-Hermitian and off-diagonal for its projection."""


class InvalidCurve(GrassgeoError):
    """A curve sample violates the projection invariants."""


class OutOfRange(GrassgeoError):
    """Metric evaluated outside the regime where its closed form is valid."""


class NotFinitePoint(GrassgeoError):
    """The point lies outside the affine chart around the base projection."""


class OutsideDomain(GrassgeoError):
    """Argument lies outside the domain of a Moebius map or chart transition."""


class NotInDisk(GrassgeoError):
    """The point lies outside the hyperbolic disk."""


class NotEpsUnitary(GrassgeoError):
    """A matrix preserving the indefinite form was required."""


class ResidualError(GrassgeoError):
    """A computed result failed its own postcondition residual check."""
