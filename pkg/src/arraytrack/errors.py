"""Exception types shared across the package.

Two families matter to callers: ``ValueError`` subclasses signal bad
configuration or malformed input files, ``NumericalError`` subclasses signal
that a computation could not produce a usable result. The CLI maps the first
family to exit code 2 and the second to exit code 3.
"""


class ConfigError(ValueError):
    """Invalid configuration value, unknown key, or impossible scenario."""


class FileFormatError(ValueError):
    """Malformed data file. ``line`` is the 1-based offending line if known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(RuntimeError):
    """A computation failed to produce a meaningful result."""


class AmbiguousSpectrumError(NumericalError):
    """Pseudo-spectrum has no usable structure (e.g. constant everywhere)."""


class IncompleteCutError(NumericalError):
    """Pattern cut does not contain the feature being measured."""
