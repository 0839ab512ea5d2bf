"""Exception types raised by the watermarking toolkit."""


class WatermarkError(ValueError):
    """Base class for every domain error raised by this package."""


class ParameterError(WatermarkError):
    """A numeric parameter is outside its admissible range."""


class GeometryError(WatermarkError):
    """Image or block dimensions are incompatible with the operation."""


class CapacityError(WatermarkError):
    """More bits were requested than the carrier can hold."""


class BoundsError(WatermarkError):
    """A ray or region leaves the image."""


class KeyOverflowError(WatermarkError):
    """Main key plus feature codes do not fit in one hash block."""


class UndefinedMetricError(WatermarkError):
    """A ratio metric has a zero denominator."""
