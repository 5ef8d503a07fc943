"""Link files, the provenance sidecar, the stats TSV and the run report."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ParseError
from .ntriples import format_triple, parse_line
from .rules import MatchLink, RelatednessLevel

INDUCED_MARK = "induced"


def sidecar_path(links_path) -> Path:
    return Path(str(links_path) + ".sources.tsv")


def serialize_links(links: Iterable[MatchLink]) -> str:
    lines = [
        format_triple(l.origin, l.level.iri, l.destination, INDUCED_MARK if l.induced else None)
        for l in links
    ]
    return "".join(line + "\n" for line in lines)


def parse_links(text: str) -> list[MatchLink]:
    links = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parsed = parse_line(line, lineno)
        if parsed is None:
            continue
        (s, p, o), comment = parsed
        try:
            level = RelatednessLevel.from_iri(p)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        links.append(MatchLink(s, o, level, induced=comment == INDUCED_MARK))
    return links


def write_sources(path, source_of: Mapping[str, str]) -> None:
    rows = ["tuple\tsource"] + [f"{t}\t{s}" for t, s in sorted(source_of.items())]
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def read_sources(path) -> dict[str, str]:
    out = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("expected two tab-separated columns", lineno)
        out[parts[0]] = parts[1]
    return out


@dataclass
class RunReport:
    tuples: int
    pairs: int
    links_per_rule: dict[int, int]
    induced_links: int
    wall_time_s: float
    workers: int
    config_digest: str
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = asdict(self)
        doc["links_per_rule"] = {str(k): v for k, v in self.links_per_rule.items()}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        per_rule = ", ".join(f"rule {k}: {v}" for k, v in sorted(self.links_per_rule.items()))
        def n(count, noun):
            return f"{count} {noun}" + ("" if count == 1 else "s")

        return (
            f"{n(self.tuples, 'tuple')}, {n(self.pairs, 'pair')} compared, {per_rule} "
            f"({self.induced_links} induced); {self.wall_time_s:.2f}s on {n(self.workers, 'worker')}; "
            f"config {self.config_digest}"
        )
