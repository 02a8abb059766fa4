"""Exception hierarchy shared by every module of the toolkit."""


class Gl3TwistError(Exception):
    """Base class for all toolkit errors."""


class NonInvertible(Gl3TwistError, ValueError):
    pass


class NotAUnit(Gl3TwistError, ValueError):
    pass


class InvalidModulus(Gl3TwistError, ValueError):
    pass


class InvalidCongruence(Gl3TwistError, ValueError):
    pass


class NoWitness(Gl3TwistError):
    pass


class OutOfRange(Gl3TwistError, ValueError):
    pass


class NotDivisible(Gl3TwistError, ValueError):
    pass


class QuadratureFailure(Gl3TwistError, RuntimeError):
    pass


class NoStationaryPoint(Gl3TwistError):
    pass


class DegenerateSecondDerivative(Gl3TwistError):
    pass


class ContourViolation(Gl3TwistError, ValueError):
    pass


class TailBoundExceeded(Gl3TwistError, RuntimeError):
    pass


class OutOfWindow(Gl3TwistError, ValueError):
    pass


class RegimeViolation(Gl3TwistError, ValueError):
    pass


class UnknownSymbol(Gl3TwistError, KeyError):
    pass


class EmptyLedger(Gl3TwistError, ValueError):
    pass


class ConfigError(Gl3TwistError, ValueError):
    pass
