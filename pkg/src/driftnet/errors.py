"""Exception types shared across the simulator."""


class DriftnetError(Exception):
    """Base class for all driftnet errors."""


class ConfigurationError(DriftnetError):
    """A settings document or scenario is invalid; message names the offending key(s)."""


class SettingsParseError(ConfigurationError):
    """Raised while reading a settings file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MapParseError(DriftnetError):
    """Raised while reading a WKT map file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class WorldError(DriftnetError):
    """The simulation world is unusable (e.g. empty map with map-based movement)."""


class InternalError(DriftnetError):
    """An internal invariant was violated; indicates a simulator defect."""
