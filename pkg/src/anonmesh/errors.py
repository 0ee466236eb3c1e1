"""Exception types shared across the package."""


class AnonMeshError(Exception):
    """Base class for all toolkit errors."""


class DatasetError(AnonMeshError):
    """Malformed dataset input; message carries the source name and line number."""


class ConfigError(AnonMeshError):
    """Invalid configuration file or key; message names the offending key."""


class EnumerationLimitError(AnonMeshError):
    """Path enumeration exceeded the configured result-size cap."""


class SimulationError(AnonMeshError):
    """Simulation preconditions violated (disconnected graph, zero-rate link)."""
