"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid parameters, grids, profiles or config files; nothing was computed."""


class UnsupportedGeometryError(ConfigurationError):
    """Operation is not defined for the requested grid geometry."""


class UnsupportedProfileError(ConfigurationError):
    """Barrier profile shape outside the single-barrier model."""


class NumericalError(RuntimeError):
    """A solver failed or produced values violating a hard invariant."""
