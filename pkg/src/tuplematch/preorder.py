"""Argument comparators: set inclusion, link closure and ontology subsumption.

An argument value is either :data:`UNKNOWN` (the unspecified argument, read
as "every individual may apply") or a frozenset of canonical individual IRIs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import ConfigError
from .kb import KnowledgeBase, OntologyView


class _Unknown:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __reduce__(self):
        return (_Unknown, ())


UNKNOWN = _Unknown()

ArgumentValue = Union[_Unknown, frozenset]


def is_unknown(value: ArgumentValue) -> bool:
    return value is UNKNOWN


def members(iris: Iterable[str], kb: KnowledgeBase) -> frozenset[str]:
    """Canonicalize a collection of individual IRIs."""
    return frozenset(kb.canonical(e) for e in iris)


@dataclass(frozen=True)
class Subset:
    def __str__(self) -> str:
        return "subset"


@dataclass(frozen=True)
class LinkClosure:
    predicate: str

    def __str__(self) -> str:
        return f"link({self.predicate})"


@dataclass(frozen=True)
class OntoSubsumption:
    view: OntologyView

    def __str__(self) -> str:
        return f"onto({self.view.name})"


PreorderSpec = Union[Subset, LinkClosure, OntoSubsumption]


def subset_leq(a: Iterable[str], b: Iterable[str], kb: KnowledgeBase | None = None) -> bool:
    if kb is not None:
        return members(a, kb) <= members(b, kb)
    return frozenset(a) <= frozenset(b)


def link_leq(a: Iterable[str], b: Iterable[str], p: str, kb: KnowledgeBase) -> bool:
    """Every element of ``a`` reaches some element of ``b`` through ``p``."""
    b = members(b, kb)
    return all(not kb.p_reachable_set(e1, p).isdisjoint(b) for e1 in a)


def link_equiv(a, b, p: str, kb: KnowledgeBase) -> bool:
    return link_leq(a, b, p, kb) and link_leq(b, a, p, kb)


def _upper_classes(b: frozenset[str], view: OntologyView, kb: KnowledgeBase) -> set[str]:
    upper: set[str] = set()
    for e2 in b:
        upper |= kb.msci(view, e2)
    return upper


def _onto_covered(e1: str, b: frozenset[str], upper: set[str], view: OntologyView, kb: KnowledgeBase) -> bool:
    if e1 in b:
        return True
    classes = kb.msci(view, e1)
    if not classes:
        return False
    return all(any(kb.subsumed_by(c1, c2) for c2 in upper) for c1 in classes)


def onto_leq(a: Iterable[str], b: Iterable[str], view: OntologyView, kb: KnowledgeBase) -> bool:
    """Each element of ``a`` is in ``b`` or all its most specific classes sit
    below a most specific class of some element of ``b``."""
    a = members(a, kb)
    b = members(b, kb)
    upper = _upper_classes(b, view, kb)
    return all(_onto_covered(e1, b, upper, view, kb) for e1 in a)


def onto_equiv(a, b, view: OntologyView, kb: KnowledgeBase) -> bool:
    return onto_leq(a, b, view, kb) and onto_leq(b, a, view, kb)


def _check_spec(spec: PreorderSpec, kb: KnowledgeBase) -> None:
    if isinstance(spec, LinkClosure):
        if spec.predicate not in kb.transitive_predicates:
            raise ConfigError(f"predicate {spec.predicate} is not designated reflexive-transitive")
    elif isinstance(spec, OntoSubsumption):
        missing = spec.view.member_classes - kb.classes
        if missing:
            raise ConfigError(f"view {spec.view.name!r} names unknown classes: {sorted(missing)[:3]}")
    elif not isinstance(spec, Subset):
        raise ConfigError(f"unsupported preorder: {spec!r}")


def members_leq(a: frozenset[str], b: frozenset[str], spec: PreorderSpec, kb: KnowledgeBase) -> bool:
    if isinstance(spec, Subset):
        return subset_leq(a, b, kb)
    if isinstance(spec, LinkClosure):
        return link_leq(a, b, spec.predicate, kb)
    return onto_leq(a, b, spec.view, kb)


def arg_leq(a: ArgumentValue, b: ArgumentValue, spec: PreorderSpec, kb: KnowledgeBase) -> bool:
    _check_spec(spec, kb)
    if b is UNKNOWN:
        return True
    if a is UNKNOWN:
        return False
    return members_leq(a, b, spec, kb)


def arg_equiv(a: ArgumentValue, b: ArgumentValue, spec: PreorderSpec, kb: KnowledgeBase) -> bool:
    return arg_leq(a, b, spec, kb) and arg_leq(b, a, spec, kb)


def covered(e: str, b: frozenset[str], spec: PreorderSpec, kb: KnowledgeBase) -> bool:
    """Whether the singleton ``{e}`` is below the member set ``b``."""
    return members_leq(frozenset((kb.canonical(e),)), b, spec, kb)


class Comparator:
    """Memoizing front end to :func:`arg_leq` for one KB.

    Intended to be owned by a single worker; sharing is still safe because
    every cached value is deterministic.
    """

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self._leq: dict[tuple, bool] = {}
        self._checked: set[PreorderSpec] = set()

    def leq(self, a: ArgumentValue, b: ArgumentValue, spec: PreorderSpec) -> bool:
        if b is UNKNOWN:
            return True
        if a is UNKNOWN:
            return False
        key = (a, b, spec)
        hit = self._leq.get(key)
        if hit is None:
            if spec not in self._checked:
                _check_spec(spec, self.kb)
                self._checked.add(spec)
            hit = self._leq[key] = members_leq(a, b, spec, self.kb)
        return hit

    def equiv(self, a: ArgumentValue, b: ArgumentValue, spec: PreorderSpec) -> bool:
        return self.leq(a, b, spec) and self.leq(b, a, spec)
