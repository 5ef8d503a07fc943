"""Relatedness rules, the similarity operator and all-pairs matching."""

from __future__ import annotations

import enum
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import networkx as nx

from .config import MatchingConfig
from .kb import OWL_SAMEAS, KnowledgeBase
from .preorder import UNKNOWN, ArgumentValue, Comparator, PreorderSpec
from .tuples import TupleRecord, aggregate_all

SKOS = "http://www.w3.org/2004/02/skos/core#"


class RelatednessLevel(enum.IntEnum):
    """Strongest first; the value is the number of the rule that emits it."""

    IDENTICAL = 1
    EQUIVALENT = 2
    MORE_SPECIFIC = 3
    ARG_COMPARABLE = 4
    WEAKLY_RELATED = 5

    @property
    def rule(self) -> int:
        return int(self)

    @property
    def symmetric(self) -> bool:
        return self is not RelatednessLevel.MORE_SPECIFIC

    @property
    def transitive(self) -> bool:
        return self <= RelatednessLevel.MORE_SPECIFIC

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @property
    def iri(self) -> str:
        return _VOCAB[self]

    @classmethod
    def from_iri(cls, iri: str) -> "RelatednessLevel":
        try:
            return _BY_IRI[iri]
        except KeyError:
            raise ValueError(f"not a link predicate: {iri}") from None


_SYMBOLS = {
    RelatednessLevel.IDENTICAL: "=",
    RelatednessLevel.EQUIVALENT: "~",
    RelatednessLevel.MORE_SPECIFIC: "<=",
    RelatednessLevel.ARG_COMPARABLE: "<>",
    RelatednessLevel.WEAKLY_RELATED: "oc",
}
_VOCAB = {
    RelatednessLevel.IDENTICAL: OWL_SAMEAS,
    RelatednessLevel.EQUIVALENT: SKOS + "closeMatch",
    RelatednessLevel.MORE_SPECIFIC: SKOS + "broadMatch",
    RelatednessLevel.ARG_COMPARABLE: SKOS + "relatedMatch",
    RelatednessLevel.WEAKLY_RELATED: SKOS + "related",
}
_BY_IRI = {iri: level for level, iri in _VOCAB.items()}


@dataclass(frozen=True, order=True)
class MatchLink:
    origin: str
    destination: str
    level: RelatednessLevel
    induced: bool = field(default=False, compare=False)

    @property
    def rule(self) -> int:
        return self.level.rule


class PairMatch(NamedTuple):
    level: RelatednessLevel
    origin: str
    destination: str


# -- similarity ---------------------------------------------------------------


def ssd(a: frozenset[str], b: frozenset[str], spec: PreorderSpec, kb: KnowledgeBase,
        comparator: Comparator | None = None) -> frozenset[str]:
    """Elements of ``a`` whose singleton is not below ``b``."""
    if a is UNKNOWN or b is UNKNOWN:
        raise ValueError("semantic set difference is undefined on unknown arguments")
    cmp = comparator or Comparator(kb)
    return frozenset(e for e in a if not cmp.leq(frozenset((kb.canonical(e),)), b, spec))


def similarity(a: frozenset[str], b: frozenset[str], spec: PreorderSpec, kb: KnowledgeBase,
               comparator: Comparator | None = None) -> Fraction:
    """Exact similarity in [0, 1]; 1 whenever the two sets are comparable."""
    cmp = comparator or Comparator(kb)
    if cmp.leq(a, b, spec) or cmp.leq(b, a, spec):
        return Fraction(1)
    union = a | b
    assert union, "similarity of two empty arguments"
    diff = ssd(a, b, spec, kb, cmp) | ssd(b, a, spec, kb, cmp)
    return 1 - Fraction(len(diff), len(union))


# -- single pair ----------------------------------------------------------------


def _rule5(ag1: Sequence[ArgumentValue], ag2: Sequence[ArgumentValue], block_specs, config: MatchingConfig,
           kb: KnowledgeBase, cmp: Comparator) -> bool:
    sims = [
        similarity(x, y, spec, kb, cmp)
        for x, y, spec in zip(ag1, ag2, block_specs)
        if x is not UNKNOWN and y is not UNKNOWN
    ]
    if len(sims) < config.gamma_unknown:
        return False
    if all(s >= config.gamma_sim for s in sims):
        return True
    return sum(1 for s in sims if s == 1) >= config.gamma_comp


def match_pair(t1: TupleRecord, t2: TupleRecord, config: MatchingConfig, kb: KnowledgeBase,
               comparator: Comparator | None = None, aggregates: Mapping[str, tuple] | None = None
               ) -> PairMatch | None:
    """Apply rules 1-5 in order and return the first level that holds.

    For the directed level the returned origin is the more specific tuple;
    ``None`` means no rule fired.
    """
    cmp = comparator or Comparator(kb)
    specs = config.arg_specs(kb)
    pairs = list(zip(t1.args, t2.args, specs))

    if all(x == y for x, y, _ in pairs):
        return PairMatch(RelatednessLevel.IDENTICAL, t1.id, t2.id)
    fwd = [cmp.leq(x, y, s) for x, y, s in pairs]
    bwd = [cmp.leq(y, x, s) for x, y, s in pairs]
    if all(f and b for f, b in zip(fwd, bwd)):
        return PairMatch(RelatednessLevel.EQUIVALENT, t1.id, t2.id)
    if all(fwd):
        return PairMatch(RelatednessLevel.MORE_SPECIFIC, t1.id, t2.id)
    if all(bwd):
        return PairMatch(RelatednessLevel.MORE_SPECIFIC, t2.id, t1.id)
    if all(
        x == y or (y is not UNKNOWN and f) or (x is not UNKNOWN and b)
        for (x, y, _), f, b in zip(pairs, fwd, bwd)
    ):
        return PairMatch(RelatednessLevel.ARG_COMPARABLE, t1.id, t2.id)

    if aggregates is not None:
        ag1, ag2 = aggregates[t1.id], aggregates[t2.id]
    else:
        ag1, ag2 = aggregate_all(t1, config, kb), aggregate_all(t2, config, kb)
    if _rule5(ag1, ag2, config.block_specs(kb), config, kb, cmp):
        return PairMatch(RelatednessLevel.WEAKLY_RELATED, t1.id, t2.id)
    return None


# -- link sets ----------------------------------------------------------------


def links_for(match: PairMatch, induced: bool = False) -> list[MatchLink]:
    out = [MatchLink(match.origin, match.destination, match.level, induced)]
    if match.level.symmetric:
        out.append(MatchLink(match.destination, match.origin, match.level, induced))
    return out


def _reach_bits(nodes: int, edges: list[tuple[int, int]]) -> list[int]:
    """Non-reflexive reachability per node as int bitsets."""
    g = nx.DiGraph()
    g.add_nodes_from(range(nodes))
    g.add_edges_from(edges)
    cond = nx.condensation(g)
    comp = cond.graph["mapping"]
    member_bits = {c: sum(1 << v for v in cond.nodes[c]["members"]) for c in cond}
    below: dict[int, int] = {}
    for c in reversed(list(nx.topological_sort(cond))):
        bits = 0
        for d in cond.successors(c):
            bits |= member_bits[d] | below[d]
        if len(cond.nodes[c]["members"]) > 1:
            bits |= member_bits[c]
        below[c] = bits
    return [below[comp[v]] for v in range(nodes)]


def close_transitive(links: Iterable[MatchLink]) -> list[MatchLink]:
    """Add the transitive closure of each of the levels from rules 1-3.

    Induced links are flagged and never placed on a pair of tuples that is
    already linked at some level, so each pair keeps a single level.
    """
    links = sorted(set(links))
    names = sorted({x for l in links for x in (l.origin, l.destination)})
    index = {x: i for i, x in enumerate(names)}
    linked_pairs = {
        (min(a, b), max(a, b)) for l in links for a, b in [(index[l.origin], index[l.destination])]
    }
    added: list[MatchLink] = []
    for level in (RelatednessLevel.IDENTICAL, RelatednessLevel.EQUIVALENT, RelatednessLevel.MORE_SPECIFIC):
        edges = [(index[l.origin], index[l.destination]) for l in links if l.level is level]
        if not edges:
            continue
        reach = _reach_bits(len(names), edges)
        new_pairs = []
        for o, bits in enumerate(reach):
            while bits:
                low = bits & -bits
                d = low.bit_length() - 1
                bits ^= low
                pair = (min(o, d), max(o, d))
                if o == d or pair in linked_pairs:
                    continue
                added.append(MatchLink(names[o], names[d], level, induced=True))
                new_pairs.append(pair)
        linked_pairs.update(new_pairs)
    return sorted(links + added)


@dataclass
class SourceMatrix:
    """Link counts per (rule, origin source, destination source)."""

    sources: tuple[str, ...]
    counts: Counter = field(default_factory=Counter)

    @classmethod
    def from_links(cls, links: Iterable[MatchLink], source_of: Mapping[str, str],
                   sources: Iterable[str] | None = None) -> "SourceMatrix":
        counts: Counter = Counter()
        for l in links:
            counts[(l.rule, source_of[l.origin], source_of[l.destination])] += 1
        names = set(sources if sources is not None else source_of.values())
        names.update(s for _, o, d in counts for s in (o, d))
        return cls(tuple(sorted(names)), counts)

    def total(self, rule: int) -> int:
        return sum(c for (r, _, _), c in self.counts.items() if r == rule)

    def to_tsv(self) -> str:
        rows = ["rule\torigin_source\tdestination_source\tcount"]
        for rule in RelatednessLevel:
            for o in self.sources:
                for d in self.sources:
                    rows.append(f"{rule.rule}\t{o}\t{d}\t{self.counts[(rule.rule, o, d)]}")
        return "\n".join(rows) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "SourceMatrix":
        counts: Counter = Counter()
        names = set()
        for line in text.splitlines()[1:]:
            if not line.strip():
                continue
            rule, o, d, c = line.split("\t")
            names.update((o, d))
            if int(c):
                counts[(int(rule), o, d)] = int(c)
        return cls(tuple(sorted(names)), counts)

    def render(self) -> str:
        """Plain-text table: one block per rule, rows are origins."""
        width = max([len(s) for s in self.sources] + [12])
        out = []
        for level in RelatednessLevel:
            out.append(f"Rule {level.rule} ({level.symbol}, {level.iri})")
            out.append(" " * width + "".join(f"  {s:>{width}}" for s in self.sources))
            for o in self.sources:
                cells = "".join(f"  {self.counts[(level.rule, o, d)]:>{width}}" for d in self.sources)
                out.append(f"{o:<{width}}{cells}")
            out.append("")
        return "\n".join(out)


# -- all pairs ------------------------------------------------------------------


def _pairwise(tuples: Sequence[TupleRecord], config: MatchingConfig, kb: KnowledgeBase,
              workers: int) -> list[MatchLink]:
    aggregates = {t.id: aggregate_all(t, config, kb) for t in tuples}
    n = len(tuples)

    def run_rows(rows: range) -> list[MatchLink]:
        cmp = Comparator(kb)  # per-worker cache
        found = []
        for i in rows:
            for j in range(i + 1, n):
                m = match_pair(tuples[i], tuples[j], config, kb, cmp, aggregates)
                if m is not None:
                    found.extend(links_for(m))
        return found

    chunks = [range(i, n, workers) for i in range(workers)] if n else []
    with ThreadPoolExecutor(max(1, workers)) as pool:
        parts = list(pool.map(run_rows, chunks))
    return [l for part in parts for l in part]


def match_all(tuples: Sequence[TupleRecord], config: MatchingConfig, kb: KnowledgeBase,
              workers: int | None = None, transitive_closure: bool | None = None,
              engine: str = "matrix") -> tuple[list[MatchLink], SourceMatrix]:
    """Match every unordered pair of distinct tuples once.

    Symmetric levels come out as two mirrored links. ``engine`` selects the
    vectorized implementation (``"matrix"``) or the memoized per-pair rule
    evaluation (``"pairwise"``); both give the same sorted output for any
    worker count.
    """
    workers = workers or os.cpu_count() or 1
    closure = config.transitive_closure if transitive_closure is None else transitive_closure
    tuples = sorted(tuples, key=lambda t: t.id)
    if engine == "matrix":
        from .engine import match_matrix

        links = match_matrix(tuples, config, kb, workers)
    elif engine == "pairwise":
        links = _pairwise(tuples, config, kb, workers)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    links = close_transitive(links) if closure else sorted(links)
    source_of = {t.id: t.source for t in tuples}
    return links, SourceMatrix.from_links(links, source_of)
