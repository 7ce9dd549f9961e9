"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration or input data (bad units, violated bounds, ...)."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (singular system, search exhausted, ...)."""
