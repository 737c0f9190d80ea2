"""Exception hierarchy.

Every error raised by the library derives from :class:`TropmodError` so the
CLI can map them to exit codes in one place.
"""


class TropmodError(Exception):
    """Base class for all library errors."""


class ParseError(TropmodError, ValueError):
    """Malformed textual input (graph spec, family, tree JSON, ...)."""


class GraphError(TropmodError, ValueError):
    """A stability graph failed validation."""


class BadLabelRange(GraphError):
    pass


class NotSimple(GraphError):
    pass


class NotConnected(GraphError):
    pass


class MissingEdge23(GraphError):
    pass


class BoundExceeded(TropmodError, ValueError):
    """Requested size is outside the supported exhaustive range."""


class InvalidFamily(TropmodError, ValueError):
    pass


class InvalidTree(TropmodError, ValueError):
    pass


class UnstableTree(TropmodError, ValueError):
    pass


class UnstableDivisor(TropmodError, ValueError):
    pass


class PairNotInFrame(TropmodError, KeyError):
    pass


class ZeroVector(TropmodError, ValueError):
    pass


class NotAFacet(TropmodError, ValueError):
    pass


class NotPure(TropmodError, ValueError):
    pass


class DimensionTooLarge(TropmodError, ValueError):
    pass


class IdenticallyZeroCoordinate(TropmodError, ValueError):
    pass


class NotGammaOpen(TropmodError, ValueError):
    pass


class AmbiguousSplit(TropmodError, ValueError):
    """The cross ratio sees a nodal image with a split other than the designated one."""


class MalformedMonomial(TropmodError, ValueError):
    pass


class ConsistencyError(TropmodError, AssertionError):
    """Two routes that must agree did not. Indicates a bug, never bad input."""
