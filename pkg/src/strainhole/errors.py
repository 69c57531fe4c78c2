"""Exception hierarchy.

Three families map onto the CLI exit codes: configuration problems (2),
physics-domain violations such as a collapsed hole or a resonant probe (3),
and numerical failures (4).
"""


class StrainholeError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(StrainholeError, ValueError):
    pass


class ParseError(ConfigError):
    def __init__(self, key, reason, line=None):
        self.key = key
        self.reason = reason
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{key}: {reason}")


class ValidationError(ConfigError):
    pass


class UnknownParameter(ConfigError):
    pass


class PhysicsDomainError(StrainholeError, ValueError):
    pass


class BeamOverfill(PhysicsDomainError):
    pass


class EdgeCrossing(PhysicsDomainError):
    pass


class ZeroDetuning(PhysicsDomainError):
    pass


class EdgeTouchesCarrier(PhysicsDomainError):
    pass


class GradientSmearDegenerate(PhysicsDomainError):
    pass


class LogDomain(PhysicsDomainError):
    pass


class NumericalError(StrainholeError, ArithmeticError):
    pass


class QuadratureFailure(NumericalError):
    pass


class NonConvergent(NumericalError):
    pass
