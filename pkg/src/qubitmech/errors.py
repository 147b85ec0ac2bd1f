"""Exception types raised across the package."""


class MechanismError(Exception):
    """Base class for all errors raised by qubitmech."""


class CapacityExceeded(MechanismError):
    """A problem size exceeds a configured ceiling (pulse count, composition count)."""


class LengthNotPowerOfTwo(MechanismError, ValueError):
    pass


class OrderTooHigh(MechanismError):
    pass


class QuadratureBudgetExceeded(MechanismError):
    pass


class SequenceFileError(MechanismError, ValueError):
    """A sequence file could not be parsed; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
