"""Exception hierarchy shared by all modules."""


class PolyliftError(Exception):
    """Base class for every error raised by polylift."""


class ParseError(PolyliftError, ValueError):
    pass


class DomainMismatch(PolyliftError, ValueError):
    """Scalars from two different quadratic fields were combined."""


class DimensionMismatch(PolyliftError, ValueError):
    pass


class EmptyPolyhedron(PolyliftError):
    pass


class LinesPresent(PolyliftError):
    pass


class NotFullDimensional(PolyliftError):
    pass


class TranslatedCone(PolyliftError):
    pass


class TranslatedComponent(PolyliftError):
    """The line-free part of a polyhedron is a translated cone."""


class NotPointedCone(PolyliftError):
    pass


class RepresentationMismatch(PolyliftError):
    """An H- and a V-representation do not describe the same set."""


class QNotOrthogonal(PolyliftError):
    pass


class RankTooSmall(PolyliftError):
    pass


class TooFewSamples(PolyliftError):
    pass


class SizeCap(PolyliftError):
    pass


class FactorizationMismatch(PolyliftError):
    pass


class MissingLinealityFactors(PolyliftError):
    pass


class DegenerateSystem(PolyliftError):
    pass


class InconsistentSystem(PolyliftError):
    pass
