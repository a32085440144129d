"""Exception types raised by afflab."""


class AfflabError(Exception):
    """Base class for all library errors."""


class DomainError(AfflabError):
    """Input outside an operation's domain (maps to CLI exit code 2)."""


class ParamDomainError(DomainError, ValueError):
    """A catalogue parameter violates its family's constraint."""


class SingularMatrix(DomainError, ValueError):
    pass


class UnknownMap(DomainError, KeyError):
    pass


class ExpPolyParseError(DomainError, ValueError):
    """Syntax error in an exponential-polynomial literal."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class VerificationError(AfflabError):
    """A computed object failed its own consistency check (CLI exit code 3)."""


class DimensionError(VerificationError):
    pass


class ClassifyError(VerificationError):
    pass


class SingularJacobian(DomainError):
    pass


class FactorError(DomainError):
    pass
