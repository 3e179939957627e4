"""Exception types shared across the package."""


class CitesimError(Exception):
    """Base class for all citesim errors."""


class ConfigurationError(CitesimError):
    """Invalid parameter value, config file, or generator argument."""


class IngestionError(CitesimError):
    """Malformed or inconsistent input file; message names the offending line."""


class StateError(CitesimError):
    """Operation applied to an object in an unusable state (e.g. empty estimate)."""


class StatsError(CitesimError):
    """Degenerate input to a statistical test or metric."""
