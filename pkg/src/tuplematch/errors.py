"""Exception hierarchy shared by the loader, the matcher and the CLI."""

from __future__ import annotations


class TupleMatchError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TupleMatchError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class VocabularyError(TupleMatchError):
    """An IRI is used both as a class and as an individual where that is not allowed."""


class UnknownEntityError(TupleMatchError, KeyError):
    def __init__(self, kind: str, iri: str):
        self.kind = kind
        self.iri = iri
        super().__init__(f"unknown {kind}: {iri}")

    def __str__(self) -> str:  # KeyError would otherwise quote the message
        return self.args[0]


class ConfigError(TupleMatchError):
    pass
