"""Brute-force reference matcher.

Everything is recomputed from the raw triple list on every question: sameAs
by graph search, subsumption by walking edges, instantiation by scanning
type assertions. Nothing here touches the engine's indices or caches, so a
disagreement points at an indexing bug. Only suitable for small inputs.
"""

from __future__ import annotations

from fractions import Fraction

from ..config import TUPLE_TO_MEMBER, MatchingConfig, PreorderDecl

DELTA = None  # the unknown argument


class NaiveKB:
    def __init__(self, triples, config: MatchingConfig):
        v = config.reserved_vocab
        self.top = config.top_class
        self.types = [(s, o) for s, p, o in triples if p == v.type]
        self.sub_class = [(s, o) for s, p, o in triples if p == v.subclass]
        self.sub_prop = [(s, o) for s, p, o in triples if p == v.subproperty]
        self.same = [(s, o) for s, p, o in triples if p == v.same_as]
        reserved = {v.type, v.subclass, v.subproperty, v.same_as}
        self.links = [(s, p, o) for s, p, o in triples if p not in reserved]
        self.same_adj: dict[str, list[str]] = {}
        for a, b in self.same:
            self.same_adj.setdefault(a, []).append(b)
            self.same_adj.setdefault(b, []).append(a)
        self.links_by_pred: dict[str, list[tuple[str, str]]] = {}
        for s, p, o in self.links:
            self.links_by_pred.setdefault(p, []).append((s, o))
        self.class_parents: dict[str, list[str]] = {}
        for a, b in self.sub_class:
            self.class_parents.setdefault(a, []).append(b)
        self.pred_parents: dict[str, list[str]] = {}
        for a, b in self.sub_prop:
            self.pred_parents.setdefault(a, []).append(b)
        self.types_of: dict[str, list[str]] = {}
        for s, o in self.types:
            self.types_of.setdefault(s, []).append(o)
        self.classes = {self.top} | {o for _, o in self.types} | {x for e in self.sub_class for x in e}

    def same_as_group(self, e):
        seen = {e}
        frontier = [e]
        while frontier:
            x = frontier.pop()
            for z in self.same_adj.get(x, ()):
                if z not in seen:
                    seen.add(z)
                    frontier.append(z)
        return seen

    def same_individual(self, a, b):
        return b in self.same_as_group(a)

    def canon(self, e):
        return min(self.same_as_group(e))

    @staticmethod
    def _walk(parents, start, goal):
        seen = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            if x == goal:
                return True
            for b in parents.get(x, ()):
                if b not in seen:
                    seen.add(b)
                    frontier.append(b)
        return False

    def class_leq(self, c, d):
        return d == self.top or self._walk(self.class_parents, c, d)

    def pred_leq(self, p, q):
        return self._walk(self.pred_parents, p, q)

    def instantiates(self, e, c):
        return any(self.class_leq(d, c) for x in self.same_as_group(e) for d in self.types_of.get(x, ()))

    def view_classes(self, roots):
        if roots is None:
            found = set(self.classes)
        else:
            found = {c for c in self.classes for r in roots if self.class_leq(c, r)}
        found.discard(self.top)
        return found

    def ci(self, view, e):
        return {c for c in view if self.instantiates(e, c)}

    def msci(self, view, e):
        cs = self.ci(view, e)
        return {c for c in cs if not any(self.class_leq(d, c) and not self.class_leq(c, d) for d in cs)}

    def p_holds(self, e1, e2, p):
        """Reflexive-transitive ``p`` between individuals, through sameAs."""
        seen = set(self.same_as_group(e1))
        frontier = list(seen)
        while frontier:
            x = frontier.pop()
            if self.same_individual(x, e2):
                return True
            for s, o in self.links_by_pred.get(p, ()):
                if self.same_individual(s, x):
                    for y in self.same_as_group(o):
                        if y not in seen:
                            seen.add(y)
                            frontier.append(y)
        return False

    def linked(self, t, pred_ok, outgoing):
        out = set()
        for s, p, o in self.links:
            if not pred_ok(p):
                continue
            if outgoing and self.same_individual(s, t):
                out.add(o)
            elif not outgoing and self.same_individual(o, t):
                out.add(s)
        return out


def _leq(kb: NaiveKB, a, b, decl: PreorderDecl, views):
    if b is DELTA:
        return True
    if a is DELTA:
        return False
    if decl.kind == "subset":
        return all(any(kb.same_individual(e1, e2) for e2 in b) for e1 in a)
    if decl.kind == "link":
        return all(any(kb.p_holds(e1, e2, decl.target) for e2 in b) for e1 in a)
    view = views[decl.target]
    for e1 in a:
        if any(kb.same_individual(e1, e2) for e2 in b):
            continue
        m1 = kb.msci(view, e1)
        if not m1:
            return False
        for c1 in m1:
            if not any(kb.class_leq(c1, c2) for e2 in b for c2 in kb.msci(view, e2)):
                return False
    return True


def _equal(kb: NaiveKB, a, b):
    if a is DELTA or b is DELTA:
        return a is b
    return all(any(kb.same_individual(x, y) for y in b) for x in a) and all(
        any(kb.same_individual(y, x) for x in a) for y in b
    )


def _similarity(kb, a, b, decl, views):
    if _leq(kb, a, b, decl, views) or _leq(kb, b, a, decl, views):
        return Fraction(1)
    d1 = {e for e in a if not _leq(kb, {e}, b, decl, views)}
    d2 = {e for e in b if not _leq(kb, {e}, a, decl, views)}
    return 1 - Fraction(len(d1 | d2), len(a | b))


def oracle_tuples(triples, config: MatchingConfig):
    """``[(tuple_id, source, args, aggregated)]`` with canonical individuals."""
    kb = NaiveKB(triples, config)
    individuals = {x for s, p, o in kb.links for x in (s, o)} | {s for s, _ in kb.types}
    individuals |= {x for e in kb.same for x in e}
    ids = sorted({kb.canon(e) for e in individuals if kb.instantiates(e, config.tuple_class)})
    schemas = sorted(config.arguments, key=lambda a: a.index)
    out = []
    for t in ids:
        args = []
        for a in schemas:
            found = kb.linked(t, lambda p, a=a: kb.pred_leq(p, a.predicate), a.direction == TUPLE_TO_MEMBER)
            found = {kb.canon(e) for e in found if kb.instantiates(e, a.role_class)}
            closed = False
            if config.closed_predicate and a.iri:
                marks = kb.linked(t, lambda p: p == config.closed_predicate, True)
                closed = any(kb.same_individual(m, a.iri) for m in marks)
            args.append(frozenset(found) if found or closed else DELTA)
        labels = kb.linked(t, lambda p: p == config.source_predicate, True) if config.source_predicate else set()
        source = min(kb.canon(x) for x in labels) if labels else "unknown"

        aggregated = []
        for block in config.partition:
            parts = [args[i - 1] for i in block.indices if args[i - 1] is not DELTA]
            aggregated.append(set().union(*parts) if parts else DELTA)
        extra = [set() for _ in config.partition]
        for k, block in enumerate(config.partition):
            if not block.dependency_predicates or aggregated[k] is DELTA:
                continue
            for e in aggregated[k]:
                deps = kb.linked(e, lambda p: any(kb.pred_leq(p, d) for d in block.dependency_predicates), True)
                for d in deps:
                    for j, other in enumerate(config.partition):
                        roles = {schemas[i - 1].role_class for i in other.indices}
                        if any(kb.instantiates(d, r) for r in roles):
                            extra[j].add(kb.canon(d))
        for j, more in enumerate(extra):
            if aggregated[j] is not DELTA:
                aggregated[j] |= more
        out.append((t, source, args, [x if x is DELTA else frozenset(x) for x in aggregated]))
    return kb, out


def oracle_match(triples, config: MatchingConfig, transitive_closure: bool | None = None):
    """Set of ``(origin, destination, level, induced)`` links."""
    kb, tuples = oracle_tuples(triples, config)
    views = {name: kb.view_classes(roots) for name, roots in config.views.items()}
    by_index = sorted(config.arguments, key=lambda a: a.index)
    links = set()
    for x in range(len(tuples)):
        for y in range(x + 1, len(tuples)):
            t1, _, a1, g1 = tuples[x]
            t2, _, a2, g2 = tuples[y]
            level = None
            direction = (t1, t2)
            if all(_equal(kb, u, v) for u, v in zip(a1, a2)):
                level = 1
            elif all(_leq(kb, u, v, s.preorder, views) and _leq(kb, v, u, s.preorder, views)
                     for u, v, s in zip(a1, a2, by_index)):
                level = 2
            elif all(_leq(kb, u, v, s.preorder, views) for u, v, s in zip(a1, a2, by_index)):
                level = 3
            elif all(_leq(kb, v, u, s.preorder, views) for u, v, s in zip(a1, a2, by_index)):
                level = 3
                direction = (t2, t1)
            elif all(
                _equal(kb, u, v)
                or (v is not DELTA and _leq(kb, u, v, s.preorder, views))
                or (u is not DELTA and _leq(kb, v, u, s.preorder, views))
                for u, v, s in zip(a1, a2, by_index)
            ):
                level = 4
            else:
                sims = [
                    _similarity(kb, u, v, b.preorder, views)
                    for u, v, b in zip(g1, g2, config.partition)
                    if u is not DELTA and v is not DELTA
                ]
                if len(sims) >= config.gamma_unknown and (
                    all(s >= config.gamma_sim for s in sims)
                    or sum(1 for s in sims if s == 1) >= config.gamma_comp
                ):
                    level = 5
            if level is None:
                continue
            links.add((direction[0], direction[1], level, False))
            if level != 3:
                links.add((direction[1], direction[0], level, False))

    closure = config.transitive_closure if transitive_closure is None else transitive_closure
    if closure:
        for level in (1, 2, 3):
            blocked = {frozenset((o, d)) for o, d, _, _ in links}
            reach = {(o, d) for o, d, lv, _ in links if lv == level}
            changed = True
            while changed:
                changed = False
                for o, m in list(reach):
                    for m2, d in list(reach):
                        if m == m2 and (o, d) not in reach:
                            reach.add((o, d))
                            changed = True
            for o, d in reach:
                if o != d and frozenset((o, d)) not in blocked:
                    links.add((o, d, level, True))
    return links
