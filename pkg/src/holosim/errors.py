"""Exception types shared across the simulator."""


class HolosimError(Exception):
    """Base class for all simulator errors."""


class ShapeError(HolosimError, ValueError):
    """Operands have incompatible dimensions."""


class ValidationError(HolosimError, ValueError):
    """An input violates a structural requirement (Hermiticity, unitarity, ...)."""


class ConfigurationError(HolosimError, ValueError):
    """Bad user configuration: unknown preset, invalid grid, step too large."""


class InvariantViolation(HolosimError, RuntimeError):
    """A numerical invariant drifted out of tolerance during a run."""
