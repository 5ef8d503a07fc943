"""In-memory knowledge base with sameAs canonicalization and closure indices.

The store is built once by :func:`load_kb` and is read-only afterwards, so it
can be shared between matcher threads without locking. Query caches are plain
dicts; concurrent fills compute identical values.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import networkx as nx
from networkx.utils import UnionFind

from .errors import ConfigError, UnknownEntityError, VocabularyError

log = logging.getLogger(__name__)

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_SUBCLASSOF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
RDFS_SUBPROPERTYOF = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf"
OWL_SAMEAS = "http://www.w3.org/2002/07/owl#sameAs"
OWL_THING = "http://www.w3.org/2002/07/owl#Thing"


@dataclass(frozen=True)
class ReservedVocab:
    type: str = RDF_TYPE
    subclass: str = RDFS_SUBCLASSOF
    subproperty: str = RDFS_SUBPROPERTYOF
    same_as: str = OWL_SAMEAS

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str] | None) -> "ReservedVocab":
        if not mapping:
            return cls()
        unknown = set(mapping) - {"type", "subclass", "subproperty", "same_as"}
        if unknown:
            raise ConfigError(f"unknown reserved vocabulary keys: {sorted(unknown)}")
        return cls(**mapping)


@dataclass(frozen=True)
class OntologyView:
    """A named subset of the KB classes standing for one ontology.

    ``top_excluded`` must stay True in normal use; switching it off makes every
    individual instantiate the top class, which exists only to show what goes
    wrong without the exclusion.
    """

    name: str
    member_classes: frozenset[str]
    top_excluded: bool = True


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Hierarchy:
    """Reflexive-transitive closure of a subsumption relation.

    Mutually subsuming names are collapsed into one node of the condensation;
    ancestor and descendant sets are stored as int bitsets over those nodes.
    """

    def __init__(self, names: Iterable[str], edges: Iterable[tuple[str, str]]):
        g = nx.DiGraph()
        g.add_nodes_from(names)
        g.add_edges_from(edges)  # child -> parent
        dag = nx.condensation(g)
        self.node_of: dict[str, int] = dict(dag.graph["mapping"])
        self.members: list[tuple[str, ...]] = [
            tuple(sorted(dag.nodes[n]["members"])) for n in range(len(dag))
        ]
        order = list(nx.topological_sort(dag))
        anc = [0] * len(dag)
        for n in reversed(order):
            mask = 1 << n
            for parent in dag.successors(n):
                mask |= anc[parent]
            anc[n] = mask
        desc = [0] * len(dag)
        for n in order:
            mask = 1 << n
            for child in dag.predecessors(n):
                mask |= desc[child]
            desc[n] = mask
        self._anc = anc
        self._desc = desc
        self._anc_names: dict[int, frozenset[str]] = {}
        self._desc_names: dict[int, frozenset[str]] = {}

    def __contains__(self, name: str) -> bool:
        return name in self.node_of

    def leq(self, a: str, b: str) -> bool:
        return bool(self._anc[self.node_of[a]] >> self.node_of[b] & 1)

    def equivalent(self, a: str, b: str) -> bool:
        return self.node_of[a] == self.node_of[b]

    def _names(self, mask: int) -> frozenset[str]:
        return frozenset(name for n in _bits(mask) for name in self.members[n])

    def ancestors(self, name: str) -> frozenset[str]:
        n = self.node_of[name]
        cached = self._anc_names.get(n)
        if cached is None:
            cached = self._anc_names[n] = self._names(self._anc[n])
        return cached

    def descendants(self, name: str) -> frozenset[str]:
        n = self.node_of[name]
        cached = self._desc_names.get(n)
        if cached is None:
            cached = self._desc_names[n] = self._names(self._desc[n])
        return cached


class _ReachIndex:
    """Reflexive-transitive reachability over the edges of one predicate."""

    def __init__(self, edges: Iterable[tuple[str, str]]):
        g = nx.DiGraph()
        g.add_edges_from(edges)
        dag = nx.condensation(g)
        self.node_of: dict[str, int] = dict(dag.graph["mapping"])
        self._members = [tuple(dag.nodes[n]["members"]) for n in range(len(dag))]
        reach = [0] * len(dag)
        for n in reversed(list(nx.topological_sort(dag))):
            mask = 1 << n
            for succ in dag.successors(n):
                mask |= reach[succ]
            reach[n] = mask
        self._reach = reach
        self._sets: dict[int, frozenset[str]] = {}

    def reachable(self, a: str, b: str) -> bool:
        if a == b:
            return True
        na = self.node_of.get(a)
        nb = self.node_of.get(b)
        if na is None or nb is None:
            return False
        return bool(self._reach[na] >> nb & 1)

    def reachable_set(self, a: str) -> frozenset[str]:
        na = self.node_of.get(a)
        if na is None:
            return frozenset((a,))
        cached = self._sets.get(na)
        if cached is None:
            cached = frozenset(m for n in _bits(self._reach[na]) for m in self._members[n])
            self._sets[na] = cached
        return cached


class KnowledgeBase:
    """Individuals, class/predicate hierarchies, types and object links.

    Every individual-valued structure is keyed on canonical IRIs: the
    lexicographically least member of each sameAs class.
    """

    def __init__(
        self,
        *,
        individuals: Iterable[str],
        classes: Iterable[str],
        predicates: Iterable[str],
        class_edges: Iterable[tuple[str, str]],
        predicate_edges: Iterable[tuple[str, str]],
        instantiation: Iterable[tuple[str, str]],
        object_links: Iterable[tuple[str, str, str]],
        same_as: Iterable[tuple[str, str]] = (),
        top: str = OWL_THING,
        transitive_predicates: Iterable[str] = (),
    ):
        self.top = top
        self.individuals = frozenset(individuals)
        self.classes = frozenset(classes) | {top}
        self.predicates = frozenset(predicates)

        uf = UnionFind(self.individuals)
        for a, b in same_as:
            uf.union(a, b)
        canon: dict[str, str] = {}
        groups: dict[str, frozenset[str]] = {}
        for group in uf.to_sets():
            rep = min(group)
            groups[rep] = frozenset(group)
            for member in group:
                canon[member] = rep
        self._canon = canon
        self.same_as_classes = groups

        class_edges = list(class_edges)
        self.class_subsumption = frozenset(class_edges)
        self._classes = _Hierarchy(self.classes, class_edges + [(c, top) for c in self.classes if c != top])
        predicate_edges = list(predicate_edges)
        self.predicate_subsumption = frozenset(predicate_edges)
        self._predicates = _Hierarchy(self.predicates, predicate_edges)

        types: dict[str, set[str]] = defaultdict(set)
        for e, c in instantiation:
            types[canon[e]].add(c)
        self._types = {e: frozenset(cs) for e, cs in types.items()}

        out: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
        inc: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
        links = set()
        for s, p, o in object_links:
            cs, co = canon[s], canon[o]
            links.add((cs, p, co))
            out[p][cs].add(co)
            inc[p][co].add(cs)
        self.object_links = frozenset(links)
        self._out = {p: {k: frozenset(v) for k, v in m.items()} for p, m in out.items()}
        self._in = {p: {k: frozenset(v) for k, v in m.items()} for p, m in inc.items()}

        self.transitive_predicates = frozenset(transitive_predicates)
        self._reach = {
            p: _ReachIndex((s, o) for s, o_set in self._out.get(p, {}).items() for o in o_set)
            for p in self.transitive_predicates
        }
        self._ci_cache: dict[tuple[OntologyView, str], frozenset[str]] = {}
        self._msci_cache: dict[tuple[OntologyView, str], frozenset[str]] = {}
        self._entailed_cache: dict[str, frozenset[str]] = {}

    # -- lookups -----------------------------------------------------------

    def canonical(self, e: str) -> str:
        try:
            return self._canon[e]
        except KeyError:
            raise UnknownEntityError("individual", e) from None

    def _check_class(self, c: str) -> None:
        if c not in self._classes:
            raise UnknownEntityError("class", c)

    def _check_predicate(self, p: str) -> None:
        if p not in self._predicates:
            raise UnknownEntityError("predicate", p)

    def is_class(self, c: str) -> bool:
        return c in self._classes

    def is_predicate(self, p: str) -> bool:
        return p in self._predicates

    def is_individual(self, e: str) -> bool:
        return e in self._canon

    # -- subsumption -------------------------------------------------------

    def subsumed_by(self, c: str, d: str) -> bool:
        """``c ⊑ d`` under the reflexive-transitive class hierarchy."""
        self._check_class(c)
        self._check_class(d)
        return self._classes.leq(c, d)

    def strictly_subsumed_by(self, c: str, d: str) -> bool:
        self._check_class(c)
        self._check_class(d)
        return self._classes.leq(c, d) and not self._classes.equivalent(c, d)

    def class_ancestors(self, c: str) -> frozenset[str]:
        self._check_class(c)
        return self._classes.ancestors(c)

    def class_descendants(self, c: str) -> frozenset[str]:
        self._check_class(c)
        return self._classes.descendants(c)

    def predicate_subsumed_by(self, p: str, q: str) -> bool:
        self._check_predicate(p)
        self._check_predicate(q)
        return self._predicates.leq(p, q)

    def sub_predicates(self, p: str) -> frozenset[str]:
        self._check_predicate(p)
        return self._predicates.descendants(p)

    # -- instantiation -----------------------------------------------------

    def declared_types(self, e: str) -> frozenset[str]:
        return self._types.get(self.canonical(e), frozenset())

    def entailed_types(self, e: str) -> frozenset[str]:
        """Declared classes of ``e`` closed upward; the top class is not added."""
        ce = self.canonical(e)
        cached = self._entailed_cache.get(ce)
        if cached is None:
            acc: set[str] = set()
            for c in self._types.get(ce, ()):
                acc |= self._classes.ancestors(c)
            acc.discard(self.top)
            cached = self._entailed_cache[ce] = frozenset(acc)
        return cached

    def instances_of(self, c: str) -> list[str]:
        """Canonical individuals entailed to instantiate ``c``, sorted."""
        self._check_class(c)
        return sorted(e for e in self._types if c in self.entailed_types(e))

    def view(self, name: str, roots: Iterable[str] | None = None) -> OntologyView:
        """Classes under ``roots`` (all classes when no roots are given), top removed."""
        if roots is None:
            members = set(self.classes)
        else:
            members = set()
            for r in roots:
                if r not in self._classes:
                    raise ConfigError(f"view {name!r}: unknown root class {r}")
                members |= self._classes.descendants(r)
        members.discard(self.top)
        return OntologyView(name, frozenset(members))

    def ci(self, view: OntologyView, e: str) -> frozenset[str]:
        ce = self.canonical(e)
        key = (view, ce)
        cached = self._ci_cache.get(key)
        if cached is None:
            cached = self.entailed_types(ce) & view.member_classes
            if not view.top_excluded:
                cached = cached | {self.top}
            self._ci_cache[key] = cached
        return cached

    def msc(self, class_set: Iterable[str]) -> frozenset[str]:
        cs = set(class_set)
        for c in cs:
            self._check_class(c)
        h = self._classes
        return frozenset(
            c for c in cs if not any(h.leq(d, c) and not h.equivalent(d, c) for d in cs)
        )

    def msci(self, view: OntologyView, e: str) -> frozenset[str]:
        ce = self.canonical(e)
        key = (view, ce)
        cached = self._msci_cache.get(key)
        if cached is None:
            cached = self._msci_cache[key] = self.msc(self.ci(view, ce))
        return cached

    # -- object links ------------------------------------------------------

    def linked(self, e: str, predicates: Iterable[str], *, outgoing: bool = True) -> frozenset[str]:
        """Canonical individuals joined to ``e`` by any of ``predicates``."""
        ce = self.canonical(e)
        index = self._out if outgoing else self._in
        acc: set[str] = set()
        for p in predicates:
            acc |= index.get(p, {}).get(ce, frozenset())
        return frozenset(acc)

    def _reach_index(self, p: str) -> _ReachIndex:
        try:
            return self._reach[p]
        except KeyError:
            raise ConfigError(f"predicate {p} is not designated reflexive-transitive") from None

    def p_reachable(self, e1: str, e2: str, p: str) -> bool:
        index = self._reach_index(p)
        return index.reachable(self.canonical(e1), self.canonical(e2))

    def p_reachable_set(self, e: str, p: str) -> frozenset[str]:
        """Every canonical individual reachable from ``e`` through ``p``, ``e`` included."""
        return self._reach_index(p).reachable_set(self.canonical(e))


def load_kb(
    triples: Iterable[tuple[str, str, str]],
    reserved_vocab: ReservedVocab | Mapping[str, str] | None = None,
    *,
    top: str = OWL_THING,
    transitive_predicates: Iterable[str] = (),
) -> KnowledgeBase:
    """Sort triples into the KB indices according to the reserved vocabulary.

    Raises :class:`VocabularyError` when an identity triple touches a class.
    """
    vocab = reserved_vocab if isinstance(reserved_vocab, ReservedVocab) else ReservedVocab.from_mapping(reserved_vocab)
    individuals: set[str] = set()
    classes: set[str] = set()
    predicates: set[str] = set()
    class_edges: list[tuple[str, str]] = []
    predicate_edges: list[tuple[str, str]] = []
    instantiation: list[tuple[str, str]] = []
    links: list[tuple[str, str, str]] = []
    same_as: list[tuple[str, str]] = []

    for s, p, o in triples:
        if p == vocab.type:
            individuals.add(s)
            classes.add(o)
            instantiation.append((s, o))
        elif p == vocab.subclass:
            classes.update((s, o))
            class_edges.append((s, o))
        elif p == vocab.subproperty:
            predicates.update((s, o))
            predicate_edges.append((s, o))
        elif p == vocab.same_as:
            individuals.update((s, o))
            same_as.append((s, o))
        else:
            individuals.update((s, o))
            predicates.add(p)
            links.append((s, p, o))

    for s, o in same_as:
        for x in (s, o):
            if x in classes:
                raise VocabularyError(f"identity triple ({s}, {o}) involves class {x}")

    return KnowledgeBase(
        individuals=individuals,
        classes=classes,
        predicates=predicates,
        class_edges=class_edges,
        predicate_edges=predicate_edges,
        instantiation=instantiation,
        object_links=links,
        same_as=same_as,
        top=top,
        transitive_predicates=transitive_predicates,
    )
