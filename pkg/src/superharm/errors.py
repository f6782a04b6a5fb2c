"""Exception types raised across the package."""


class SuperharmError(Exception):
    pass


class DivisionByZero(SuperharmError, ZeroDivisionError):
    pass


class GammaPole(SuperharmError):
    pass


class PoleAtPoint(SuperharmError):
    pass


class ModeMismatch(SuperharmError):
    pass


class IndexOutOfRange(SuperharmError):
    pass


class NotSymplectic(SuperharmError):
    pass


class NotOrthosymplectic(SuperharmError):
    pass


class BadDimension(SuperharmError):
    pass


class NotHomogeneous(SuperharmError):
    pass


class DegreeOutOfRange(SuperharmError):
    pass


class ParamOutOfRange(SuperharmError):
    pass


class DegreeCapExceeded(SuperharmError):
    pass


class MismatchAgainstPizzetti(SuperharmError):
    pass


class HarmonicityViolated(SuperharmError):
    pass


class RouteMismatch(SuperharmError):
    pass


class NotEigenfunction(SuperharmError):
    pass


class BadOccupation(SuperharmError):
    pass


class GaussianPowerMismatch(SuperharmError):
    pass


class NotStructured(SuperharmError):
    pass


class ZeroRoot(SuperharmError):
    pass
