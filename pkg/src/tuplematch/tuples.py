"""Reified tuple extraction and aggregated arguments."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .config import TUPLE_TO_MEMBER, MatchingConfig
from .errors import ConfigError
from .kb import KnowledgeBase
from .preorder import UNKNOWN, ArgumentValue

log = logging.getLogger(__name__)

UNKNOWN_SOURCE = "unknown"


@dataclass(frozen=True)
class TupleRecord:
    id: str
    source: str
    args: tuple[ArgumentValue, ...]


def _check_schema(kb: KnowledgeBase, config: MatchingConfig) -> None:
    for a in config.arguments:
        if not kb.is_class(a.role_class):
            raise ConfigError(f"argument {a.index}: unknown role class {a.role_class}")
        if not kb.is_predicate(a.predicate):
            raise ConfigError(f"argument {a.index}: unknown predicate {a.predicate}")


def _extract_one(t: str, kb: KnowledgeBase, config: MatchingConfig, schemas) -> TupleRecord:
    closed = frozenset()
    if config.closed_predicate and kb.is_predicate(config.closed_predicate):
        closed = kb.linked(t, [config.closed_predicate])
    args = []
    for schema, preds in schemas:
        linked = kb.linked(t, preds, outgoing=schema.direction == TUPLE_TO_MEMBER)
        found = frozenset(e for e in linked if schema.role_class in kb.entailed_types(e))
        if not found and not (schema.iri and schema.iri in closed):
            args.append(UNKNOWN)
        else:
            args.append(found)
    source = UNKNOWN_SOURCE
    if config.source_predicate and kb.is_predicate(config.source_predicate):
        labels = kb.linked(t, [config.source_predicate])
        if labels:
            source = min(labels)
    return TupleRecord(t, source, tuple(args))


def extract_tuples(kb: KnowledgeBase, config: MatchingConfig, workers: int = 1) -> list[TupleRecord]:
    """One record per instance of the tuple class, sorted by tuple IRI.

    An argument with no qualifying member is unknown unless the tuple carries
    the closed-argument marker for it.
    """
    if not kb.is_class(config.tuple_class):
        log.info("tuple class %s absent from KB; nothing to extract", config.tuple_class)
        return []
    _check_schema(kb, config)
    schemas = [
        (a, kb.sub_predicates(a.predicate))
        for a in sorted(config.arguments, key=lambda a: a.index)
    ]
    ids = kb.instances_of(config.tuple_class)
    if workers > 1 and len(ids) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda t: _extract_one(t, kb, config, schemas), ids))
    return [_extract_one(t, kb, config, schemas) for t in ids]


def aggregate_all(t: TupleRecord, config: MatchingConfig, kb: KnowledgeBase) -> tuple[ArgumentValue, ...]:
    """Aggregated argument of every partition block, dependency expansion included.

    Individuals reached through a block's dependency predicates are routed to
    each block whose role classes they instantiate; a block whose arguments
    are all unknown stays unknown.
    """
    unions: list[ArgumentValue] = []
    for block in config.partition:
        specified = [t.args[i - 1] for i in block.indices if t.args[i - 1] is not UNKNOWN]
        unions.append(frozenset().union(*specified) if specified else UNKNOWN)

    if not any(b.dependency_predicates for b in config.partition):
        return tuple(unions)

    by_index = {a.index: a for a in config.arguments}
    roles = [{by_index[i].role_class for i in block.indices} for block in config.partition]
    extra: list[set[str]] = [set() for _ in config.partition]
    for k, block in enumerate(config.partition):
        if not block.dependency_predicates or unions[k] is UNKNOWN:
            continue
        preds = set()
        for p in block.dependency_predicates:
            if kb.is_predicate(p):  # absent from the KB: nothing depends on anything
                preds |= kb.sub_predicates(p)
        for e in unions[k]:
            for d in kb.linked(e, preds):
                types = kb.entailed_types(d)
                targets = [j for j, rs in enumerate(roles) if rs & types]
                if not targets:
                    log.warning("dependency %s of %s matches no role class; dropped", d, e)
                for j in targets:
                    extra[j].add(d)
    return tuple(
        u if u is UNKNOWN or not extra[k] else u | extra[k] for k, u in enumerate(unions)
    )


def aggregate(t: TupleRecord, block: int, config: MatchingConfig, kb: KnowledgeBase) -> ArgumentValue:
    """Aggregated argument of partition block ``block`` (0-based)."""
    if not 0 <= block < config.m:
        raise ConfigError(f"block {block} not in partition of size {config.m}")
    return aggregate_all(t, config, kb)[block]
