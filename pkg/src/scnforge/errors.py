"""Exception and warning types shared across the engine."""


class EngineError(Exception):
    """Base class for all scenario-engine errors."""


class InvalidInput(EngineError, ValueError):
    """An argument violates an operation's preconditions."""


class DegenerateGeometry(EngineError):
    """Geometry with a vanishing tangent or otherwise unusable shape."""


class InternalSolverError(EngineError):
    """A system that should be well posed failed to solve."""


class InvalidTrack(EngineError):
    """Track bounds do not describe a usable drivable region."""


class BoundsCsvError(EngineError):
    """Malformed bounds CSV. Carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SchemaError(EngineError):
    """Scenario document is missing or mistypes a required field."""

    def __init__(self, field: str, message: str = "missing required field"):
        super().__init__(f"{message}: {field}")
        self.field = field


class UnsupportedVersion(EngineError):
    """Scenario document declares a schema version this build cannot read."""


class ExportRefused(EngineError):
    """Scenario cannot be exported; the message carries the reason."""


class StaleTrajectoryWarning(UserWarning):
    """Stored trajectory tables differ from what the authoring data yields."""
