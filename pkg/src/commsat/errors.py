"""Exception types raised across commsat."""


class CommsatError(Exception):
    """Base class for all commsat errors."""


class InvalidParameters(CommsatError, ValueError):
    pass


class DomainError(CommsatError, ValueError):
    """A variable or node lies outside the domain of an assignment or partition."""


class CommunityTooSmall(CommsatError):
    pass


class InfeasibleSelection(CommsatError):
    pass


class TooLarge(CommsatError, ValueError):
    pass


class ParseError(CommsatError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaVersionError(CommsatError, ValueError):
    pass
