"""Exception types raised across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters for a sampler, planner, or simulation config."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class MatchingError(ValueError):
    """Malformed matching instance (duplicates, unknown ids, bad capacities)."""


class SimulationError(RuntimeError):
    """Internal inconsistency detected while a simulation is running."""
