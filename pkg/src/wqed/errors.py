"""Exception hierarchy shared by the library and the CLI."""


class WqedError(Exception):
    """Base class for all errors raised by wqed."""


class ConfigError(WqedError, ValueError):
    """Invalid run configuration or invalid physical parameters."""


class NumericalError(WqedError, ArithmeticError):
    """A computation could not be carried out to the required accuracy."""


class DegenerateDenominatorError(NumericalError):
    """A closed-form amplitude hit a vanishing denominator."""


class NonphysicalAmplitudeError(NumericalError, ValueError):
    """An even-mode phase factor with modulus larger than one."""


class PerfectReflectorError(NumericalError):
    """The cell transmits nothing, so its transfer matrix does not exist."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""


class GridPointError(NumericalError):
    """Wraps an error raised while evaluating one point of a grid."""

    def __init__(self, index, coordinate, cause):
        self.index = index
        self.coordinate = coordinate
        self.cause = cause
        super().__init__(f"grid point {index} ({coordinate!r}): {cause}")
