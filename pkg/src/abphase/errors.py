"""Exception hierarchy shared across the package.

Each class carries the process exit code used by the command line front end.
"""


class ABPhaseError(Exception):
    exit_code = 1


class ConfigError(ABPhaseError, ValueError):
    """Malformed or invalid scenario configuration."""

    exit_code = 1

    def __init__(self, message, field=None, line=None, column=None):
        self.field = field
        self.line = line
        self.column = column
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}, column {column}")
        if where:
            message = f"{message} ({'; '.join(where)})"
        super().__init__(message)


class GeometryError(ABPhaseError):
    exit_code = 2


class ProximityError(GeometryError):
    """A field point lies inside the exclusion zone of a source."""

    def __init__(self, message, source=None, distance=None):
        self.source = source
        self.distance = distance
        super().__init__(message)


class SingularSeparationError(GeometryError, ValueError):
    pass


class ScenarioValidityError(GeometryError):
    pass


class ConvergenceError(ABPhaseError):
    exit_code = 3

    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)
