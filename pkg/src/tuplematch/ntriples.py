"""Reader and writer for the IRI-only subset of N-Triples.

Only ``<s> <p> <o> .`` statements are accepted. Blank nodes and literals are
rejected: tuple arguments never carry literal values. A statement may be
followed by a ``#`` comment, which the reader hands back to the caller.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, TextIO

from .errors import ParseError

Triple = tuple[str, str, str]

_IRI = r"<([^<>\"{}|^`\\\x00-\x20]+)>"
_STATEMENT = re.compile(rf"^\s*{_IRI}\s*{_IRI}\s*{_IRI}\s*\.\s*(?:#(.*))?$")


def parse_line(line: str, lineno: int | None = None) -> tuple[Triple, str | None] | None:
    """Parse one line; return ``None`` for blank and comment-only lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    m = _STATEMENT.match(stripped)
    if m is None:
        raise ParseError(f"malformed triple: {stripped[:80]!r}", lineno)
    s, p, o, comment = m.groups()
    return (s, p, o), (comment.strip() if comment is not None else None)


def iter_triples(lines: Iterable[str]) -> Iterator[Triple]:
    for lineno, line in enumerate(lines, start=1):
        parsed = parse_line(line, lineno)
        if parsed is not None:
            yield parsed[0]


def read_triples(path) -> list[Triple]:
    with open(path, encoding="utf-8") as fh:
        return list(iter_triples(fh))


def format_triple(s: str, p: str, o: str, comment: str | None = None) -> str:
    line = f"<{s}> <{p}> <{o}> ."
    if comment:
        line += f" # {comment}"
    return line


def write_triples(fh: TextIO, triples: Iterable[Triple]) -> None:
    for s, p, o in triples:
        fh.write(format_triple(s, p, o) + "\n")
