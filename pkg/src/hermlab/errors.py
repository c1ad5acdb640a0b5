"""Exception types raised by hermlab."""


class HermlabError(ValueError):
    """Base class for all library errors."""


class UnsupportedDegreeError(HermlabError):
    pass


class InvalidScaleError(HermlabError):
    pass


class DimensionMismatchError(HermlabError):
    pass


class ResolutionError(HermlabError):
    """Grid too coarse (or too small) for the requested computation."""


class SymbolDomainError(HermlabError):
    """A spectral symbol produced a non-finite value where it is needed."""


class GridMismatchError(HermlabError):
    pass


class UndersamplingError(HermlabError):
    pass


class QuadratureDomainError(HermlabError):
    """Integrand carries too much mass at the edge of the quadrature domain."""
