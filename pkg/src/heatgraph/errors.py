"""Exception types raised across heatgraph."""


class HeatGraphError(Exception):
    """Base class for all heatgraph errors."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class InvalidMatrix(HeatGraphError, ValueError):
    pass


class LogUndefined(HeatGraphError, ValueError):
    """An eigenvalue lies on the closed negative real axis."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.diagnostics = {}


class IllConditioned(HeatGraphError, ValueError):
    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition
        self.diagnostics = {}


class SingularMatrix(HeatGraphError, ValueError):
    pass


class NotSymmetric(HeatGraphError, ValueError):
    pass


class TooShort(HeatGraphError, ValueError):
    pass


class InvalidBand(HeatGraphError, ValueError):
    pass


class NonPositiveSample(HeatGraphError, ValueError):
    pass


class TooFew(HeatGraphError, ValueError):
    pass


class ZeroVariance(HeatGraphError, ValueError):
    pass


class ConfigError(HeatGraphError):
    """Malformed configuration; ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message, field=None, line=None):
        parts = [message]
        if field is not None:
            parts.append(f"field={field!r}")
        if line is not None:
            parts.append(f"line={line}")
        super().__init__(" ".join(parts))
        self.field = field
        self.line = line
