"""Exception types shared across the package."""


class FsgssError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FsgssError):
    """An argument is outside the domain an operation is defined on."""


class NotInvertible(FsgssError):
    """No modular inverse exists; callers usually resample and retry."""


class GenerationFailed(FsgssError):
    """A randomized search exhausted its retry budget."""


class DuplicateMember(FsgssError):
    """A member id is already present in the roster."""


class ProtocolError(FsgssError):
    """A message arrived out of order or is invalid for the current state."""


class CredentialInvalid(FsgssError):
    """The enrollment check failed; issuer misbehaved or transport corrupted."""


class MalformedSignature(FsgssError):
    """A signature field is outside its valid range."""


class RefusedUnverified(FsgssError):
    """Opening was requested for a signature that does not verify."""


class OracleTooWeak(FsgssError):
    """The discrete-log oracle cannot handle parameters of this size."""


class ParseError(FsgssError):
    """A file or wire message violates the canonical format."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
