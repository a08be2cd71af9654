"""Exception hierarchy shared by the library and the CLI."""


class CurvlabError(Exception):
    """Base class for all library errors."""


class ArgumentError(CurvlabError, ValueError):
    """Shapes, indices or parameters outside an operation's domain."""


class UnsupportedInputError(CurvlabError):
    """Input is well formed but outside what the exact pipelines can handle."""


class InvalidSectionError(CurvlabError):
    """A field violates its defining identity (e.g. J^2 != -1)."""

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class DegenerateMetricError(CurvlabError):
    """det g vanishes at the requested point."""


class ParseError(CurvlabError):
    """Malformed polynomial string or field-spec file."""

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
