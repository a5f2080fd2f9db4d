"""Exception types raised across the package."""

from __future__ import annotations


class HnnCertError(Exception):
    """Base class for all errors raised by hnncert."""


class MalformedMove(HnnCertError):
    pass


class NotRedundant(HnnCertError):
    pass


class NotSurjective(HnnCertError):
    pass


class NotHomomorphism(HnnCertError):
    pass


class NonzeroStableExponent(HnnCertError):
    pass


class NotNormalized(HnnCertError):
    pass


class BadDegree(HnnCertError):
    pass


class DegreeTooSmall(HnnCertError):
    pass


class UnknownFormat(HnnCertError):
    pass


class ResourceLimit(HnnCertError):
    pass


class PresentationSyntaxError(HnnCertError):
    """Malformed presentation or word text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownGenerator(PresentationSyntaxError):
    pass


class DuplicateGenerator(PresentationSyntaxError):
    pass
