"""Exception types shared by the solvers and the harness.

Every error carries a short machine-readable ``category`` that the CLI prints
on stderr before exiting with a nonzero status.
"""


class IlsError(Exception):
    category = "error"


class ConfigError(IlsError):
    """Invalid component parameters or an inconsistent experiment config."""

    category = "config"


class ParameterError(ConfigError):
    category = "parameter"


class ParseError(IlsError):
    category = "parse"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedFormatError(ParseError):
    category = "unsupported-format"


class DegenerateInstanceError(IlsError):
    category = "degenerate-instance"


class SizeLimitError(IlsError):
    category = "size-limit"


class ValidationError(IlsError):
    category = "invalid-solution"
