"""Exception hierarchy shared by every module."""


class GeomodError(Exception):
    """Base class for library errors."""


class InvalidArgument(GeomodError, ValueError):
    pass


class SamplingFailure(GeomodError, RuntimeError):
    """Rejection sampling exhausted its proposal budget."""


class DegenerateGraph(GeomodError, ValueError):
    """An isolated vertex makes d_i**alpha undefined (alpha < 0)."""


class EmptyGraph(GeomodError, ValueError):
    """Total edge weight is zero."""


class UnsupportedGeometry(GeomodError, NotImplementedError):
    pass


class UnsupportedDimension(GeomodError, NotImplementedError):
    pass


class TooLarge(GeomodError, ValueError):
    """Instance exceeds the exhaustive-search cap."""
