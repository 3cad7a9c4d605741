"""Exception types shared across the toolkit."""

from __future__ import annotations


class NegdetectError(Exception):
    """Base class for all toolkit errors."""


class ResourceFormatError(NegdetectError):
    """A resource file (triggers, concepts, stopwords, config, gold data) is malformed.

    The message names the offending line; `line` carries it as an int when known.
    """

    def __init__(self, message: str, *, line: int | None = None, path: str | None = None):
        super().__init__(message)
        self.line = line
        self.path = path


class PatternSyntaxError(NegdetectError):
    """A dependency pattern failed to parse. `offset` is the character position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.reason = message
        self.offset = offset


class ConlluFormatError(NegdetectError):
    """A CoNLL-U payload is malformed. `line` is the 1-based line number."""

    def __init__(self, message: str, *, line: int | None = None):
        super().__init__(message)
        self.line = line


class AlignmentError(NegdetectError):
    """A dependency graph does not line up with the tokenized sentence."""
