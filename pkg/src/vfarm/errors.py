"""Exception types shared across the package."""


class VFarmError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(VFarmError):
    """Malformed or inconsistent configuration (CLI exit code 1)."""


class WeatherDataError(VFarmError):
    """Weather file violates the CSV schema; message cites line or timestamp."""


class DomainError(VFarmError, ValueError):
    """An input is outside the validity range of a correlation or model."""


class CapacityError(VFarmError):
    """A requested thermal load exceeds the installed unit capacity."""


class SimulationError(VFarmError):
    """A scenario failed mid-integration (CLI exit code 2)."""
