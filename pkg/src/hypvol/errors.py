"""Exception types shared across the pipeline."""


class HypvolError(Exception):
    """Base class for all errors raised by this package."""


class PrecisionExhausted(HypvolError):
    """A sign query could not be decided within the configured precision cap."""


class DiagramSyntaxError(HypvolError):
    """Malformed line in a diagram file."""


class UnsupportedLabel(HypvolError):
    """Finite edge label outside the supported set {3, 4, 5, 6}."""


class BadWeight(HypvolError):
    """Dashed edge weight that is not a surd greater than 1."""


class DisconnectedGraph(HypvolError):
    """The non-orthogonality graph of the Gram matrix is not connected."""


class TooLarge(HypvolError):
    """Facet count exceeds the exhaustive cycle enumeration guard."""


class RankDeficient(HypvolError):
    """No nonsingular principal submatrix of the expected size exists."""


class FieldNotQ(HypvolError):
    """Operation requires the field of definition to be the rationals."""


class DeltaIsSquare(HypvolError):
    """The discriminant class is trivial, so the quadratic field degenerates."""


class EvenDimension(HypvolError):
    """Volume predictions are only implemented for odd dimensions.

    For even n the covolume is already pinned down by the generalized
    Gauss-Bonnet theorem, so there is nothing to predict here.
    """


class NotLorentzian(HypvolError):
    """Gram matrix does not have signature (n, 1) plus a zero part."""


class DegenerateIntersection(HypvolError):
    """A facet subset meets in more than a line; skipped during enumeration."""


class NoVertices(HypvolError):
    """Vertex enumeration produced nothing; input is unbounded or invalid."""


class TriangulationFailure(HypvolError):
    """A facet could not be triangulated by the recursive fan."""


class NonConvergent(HypvolError):
    """Shell subdivision at a cusp failed to produce a shrinking tail bound."""
