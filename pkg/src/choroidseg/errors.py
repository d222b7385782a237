"""Exception hierarchy shared by all choroidseg modules."""


class ChoroidSegError(Exception):
    """Base class for all errors raised by this package."""


class DecodeError(ChoroidSegError):
    """File missing or not decodable as a supported raster."""


class ChannelError(ChoroidSegError):
    """Input raster is not 8-bit single-channel grayscale."""


class DimensionError(ChoroidSegError):
    """Array or boundary shape violates an operation's contract."""


class ParseError(ChoroidSegError):
    """Malformed text input (label CSV, config file)."""


class ParameterError(ChoroidSegError):
    """Configuration value outside its allowed range."""


class DomainError(ChoroidSegError):
    """Numeric input outside the mathematical domain of an operation."""


class TopologyError(ChoroidSegError):
    """Node pair is not an 8-neighbor pair of the pixel grid."""


class GeometryError(ChoroidSegError):
    """Detected geometry leaves no room for a downstream stage."""


class DegenerateSelectionError(ChoroidSegError):
    """Manual-correction endpoints collapse to a single column."""


class UndefinedInputError(ChoroidSegError):
    """Operation undefined for the given input (e.g. empty matrix)."""


class UndefinedMetricError(ChoroidSegError):
    """Metric undefined for the given input (e.g. no label points)."""
