"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ReasmError(ValueError):
    """Base class for all library errors."""


class ParseError(ReasmError):
    pass


class NotThreeRegular(ReasmError):
    pass


class NotSimple(ReasmError):
    pass


class DegenerateEmbedding(ReasmError):
    pass


class NoEdges(ReasmError):
    pass


class DisconnectedContraction(ReasmError):
    pass


class Disconnected(ReasmError):
    pass


class InvalidTree(ReasmError):
    pass


class TooSmall(ReasmError):
    pass


class NotEligible(ReasmError):
    pass


class NotBiconnected(ReasmError):
    pass


class BadOuterplanarity(ReasmError):
    pass


class BadParams(ReasmError):
    pass


class WrongFamily(ReasmError):
    pass


class DegreeTooLow(ReasmError):
    pass


class TooLarge(ReasmError):
    pass


class EngineStuck(ReasmError):
    """The contraction engine reached a state where no operation applies."""
