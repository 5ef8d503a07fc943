"""Matching configuration: argument schema, partition, thresholds.

The JSON document is parsed into plain dataclasses that do not depend on a
knowledge base. Preorders naming an ontology view are resolved against a KB
with :meth:`MatchingConfig.arg_specs` / :meth:`MatchingConfig.block_specs`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .kb import OWL_THING, KnowledgeBase, OntologyView, ReservedVocab
from .preorder import LinkClosure, OntoSubsumption, PreorderSpec, Subset

TUPLE_TO_MEMBER = "tuple_to_member"
MEMBER_TO_TUPLE = "member_to_tuple"
_DIRECTIONS = (TUPLE_TO_MEMBER, MEMBER_TO_TUPLE)


@dataclass(frozen=True)
class PreorderDecl:
    kind: str  # "subset" | "link" | "onto"
    target: str | None = None

    @classmethod
    def parse(cls, raw: Any) -> "PreorderDecl":
        if raw == "subset" or raw == {"type": "subset"}:
            return cls("subset")
        if not isinstance(raw, dict) or "type" not in raw:
            raise ConfigError(f"bad preorder declaration: {raw!r}")
        kind = raw["type"]
        if kind == "link":
            if "predicate" not in raw:
                raise ConfigError("link preorder needs a 'predicate'")
            return cls("link", raw["predicate"])
        if kind == "onto":
            if "view" not in raw:
                raise ConfigError("onto preorder needs a 'view'")
            return cls("onto", raw["view"])
        raise ConfigError(f"unknown preorder type {kind!r}")

    def to_json(self) -> Any:
        if self.kind == "subset":
            return {"type": "subset"}
        key = "predicate" if self.kind == "link" else "view"
        return {"type": self.kind, key: self.target}


@dataclass(frozen=True)
class ArgumentSchema:
    index: int
    role_class: str
    predicate: str
    direction: str = TUPLE_TO_MEMBER
    preorder: PreorderDecl = PreorderDecl("subset")
    iri: str | None = None  # object of the closed-argument marker triple


@dataclass(frozen=True)
class Block:
    indices: tuple[int, ...]
    preorder: PreorderDecl = PreorderDecl("subset")
    dependency_predicates: tuple[str, ...] = ()


@dataclass
class MatchingConfig:
    tuple_class: str
    arguments: tuple[ArgumentSchema, ...]
    partition: tuple[Block, ...]
    gamma_unknown: int = 3
    gamma_sim: Fraction = Fraction(4, 5)
    gamma_comp: int = 2
    source_predicate: str | None = None
    closed_predicate: str | None = None
    reflexive_transitive_predicates: tuple[str, ...] = ()
    top_class: str = OWL_THING
    views: dict[str, tuple[str, ...] | None] = field(default_factory=dict)
    reserved_vocab: ReservedVocab = field(default_factory=ReservedVocab)
    transitive_closure: bool = True
    _resolved: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.arguments)

    @property
    def m(self) -> int:
        return len(self.partition)

    # -- structural checks ---------------------------------------------

    def problems(self) -> list[str]:
        """Violations detectable without a knowledge base."""
        found = []
        indices = [a.index for a in self.arguments]
        if sorted(indices) != list(range(1, len(indices) + 1)):
            found.append(f"argument indices must be 1..{len(indices)}, got {sorted(indices)}")
        pairs = [(a.role_class, a.predicate) for a in self.arguments]
        if len(set(pairs)) != len(pairs):
            found.append("duplicate (role_class, predicate) pair among arguments")
        for a in self.arguments:
            if a.direction not in _DIRECTIONS:
                found.append(f"argument {a.index}: direction must be one of {_DIRECTIONS}")
        seen: dict[int, int] = {}
        for k, block in enumerate(self.partition, start=1):
            if not block.indices:
                found.append(f"partition block {k} is empty")
            for i in block.indices:
                if i in seen:
                    found.append(f"index {i} appears in blocks {seen[i]} and {k}")
                elif i not in indices:
                    found.append(f"partition block {k} names unknown index {i}")
                seen.setdefault(i, k)
        for i in sorted(set(indices) - set(seen)):
            found.append(f"index {i} is not covered by the partition")
        if not 0 <= self.gamma_unknown <= self.m:
            found.append(f"gamma unknown = {self.gamma_unknown} outside [0, m={self.m}]")
        if not 0 <= self.gamma_sim <= 1:
            found.append(f"gamma sim = {self.gamma_sim} outside [0, 1]")
        if not 0 <= self.gamma_comp <= self.m:
            found.append(f"gamma comp = {self.gamma_comp} outside [0, m={self.m}]")
        decls = [a.preorder for a in self.arguments] + [b.preorder for b in self.partition]
        for d in decls:
            if d.kind == "link" and d.target not in self.reflexive_transitive_predicates:
                found.append(f"link preorder on {d.target} which is not reflexive-transitive")
            if d.kind == "onto" and d.target not in self.views:
                found.append(f"onto preorder names undeclared view {d.target!r}")
        return found

    def kb_problems(self, kb: KnowledgeBase) -> list[str]:
        found = []
        if not kb.is_class(self.tuple_class):
            found.append(f"tuple class {self.tuple_class} not in KB")
        for a in self.arguments:
            if not kb.is_class(a.role_class):
                found.append(f"argument {a.index}: role class {a.role_class} not in KB")
            if not kb.is_predicate(a.predicate):
                found.append(f"argument {a.index}: predicate {a.predicate} not in KB")
        for name, roots in self.views.items():
            for r in roots or ():
                if not kb.is_class(r):
                    found.append(f"view {name!r}: root class {r} not in KB")
        return found

    def validate(self) -> None:
        found = self.problems()
        if found:
            raise ConfigError("; ".join(found))

    # -- resolution against a KB ------------------------------------------

    def view(self, name: str, kb: KnowledgeBase) -> OntologyView:
        if name not in self.views:
            raise ConfigError(f"undeclared view {name!r}")
        return kb.view(name, self.views[name])

    def resolve(self, decl: PreorderDecl, kb: KnowledgeBase) -> PreorderSpec:
        if decl.kind == "subset":
            return Subset()
        if decl.kind == "link":
            if decl.target not in kb.transitive_predicates:
                raise ConfigError(f"predicate {decl.target} is not designated reflexive-transitive")
            return LinkClosure(decl.target)
        return OntoSubsumption(self.view(decl.target, kb))

    def _specs(self, kb: KnowledgeBase) -> tuple[tuple[PreorderSpec, ...], tuple[PreorderSpec, ...]]:
        key = id(kb)
        hit = self._resolved.get(key)
        if hit is None or hit[0] is not kb:
            args = tuple(self.resolve(a.preorder, kb) for a in sorted(self.arguments, key=lambda a: a.index))
            blocks = tuple(self.resolve(b.preorder, kb) for b in self.partition)
            hit = self._resolved[key] = (kb, args, blocks)
        return hit[1], hit[2]

    def arg_specs(self, kb: KnowledgeBase) -> tuple[PreorderSpec, ...]:
        return self._specs(kb)[0]

    def block_specs(self, kb: KnowledgeBase) -> tuple[PreorderSpec, ...]:
        return self._specs(kb)[1]

    # -- (de)serialization -----------------------------------------------

    def to_json(self) -> dict:
        vocab = self.reserved_vocab
        return {
            "tuple_class": self.tuple_class,
            "source_predicate": self.source_predicate,
            "closed_predicate": self.closed_predicate,
            "top_class": self.top_class,
            "reserved_vocab": {
                "type": vocab.type,
                "subclass": vocab.subclass,
                "subproperty": vocab.subproperty,
                "same_as": vocab.same_as,
            },
            "reflexive_transitive_predicates": list(self.reflexive_transitive_predicates),
            "views": {
                name: {"roots": list(roots) if roots is not None else None}
                for name, roots in self.views.items()
            },
            "arguments": [
                {
                    "index": a.index,
                    "role_class": a.role_class,
                    "predicate": a.predicate,
                    "direction": a.direction,
                    "preorder": a.preorder.to_json(),
                    **({"iri": a.iri} if a.iri else {}),
                }
                for a in self.arguments
            ],
            "partition": [
                {
                    "indices": list(b.indices),
                    "preorder": b.preorder.to_json(),
                    "dependency_predicates": list(b.dependency_predicates),
                }
                for b in self.partition
            ],
            "gammas": {
                "unknown": self.gamma_unknown,
                "sim": str(self.gamma_sim),
                "comp": self.gamma_comp,
            },
            "output": {"transitive_closure": self.transitive_closure},
        }

    def digest(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @classmethod
    def from_json(cls, doc: dict) -> "MatchingConfig":
        try:
            arguments = tuple(
                ArgumentSchema(
                    index=int(a["index"]),
                    role_class=a["role_class"],
                    predicate=a["predicate"],
                    direction=a.get("direction", TUPLE_TO_MEMBER),
                    preorder=PreorderDecl.parse(a.get("preorder", "subset")),
                    iri=a.get("iri"),
                )
                for a in doc["arguments"]
            )
            partition = tuple(
                Block(
                    indices=tuple(int(i) for i in b["indices"]),
                    preorder=PreorderDecl.parse(b.get("preorder", "subset")),
                    dependency_predicates=tuple(b.get("dependency_predicates", ())),
                )
                for b in doc["partition"]
            )
            gammas = doc.get("gammas", {})
            views = {}
            for name, v in doc.get("views", {}).items():
                roots = v.get("roots") if isinstance(v, dict) else v
                views[name] = tuple(roots) if roots is not None else None
            config = cls(
                tuple_class=doc["tuple_class"],
                arguments=arguments,
                partition=partition,
                gamma_unknown=int(gammas.get("unknown", 3)),
                gamma_sim=Fraction(str(gammas.get("sim", "4/5"))),
                gamma_comp=int(gammas.get("comp", 2)),
                source_predicate=doc.get("source_predicate"),
                closed_predicate=doc.get("closed_predicate"),
                reflexive_transitive_predicates=tuple(doc.get("reflexive_transitive_predicates", ())),
                top_class=doc.get("top_class", OWL_THING),
                views=views,
                reserved_vocab=ReservedVocab.from_mapping(doc.get("reserved_vocab")),
                transitive_closure=bool(doc.get("output", {}).get("transitive_closure", True)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"malformed config: {exc!r}") from exc
        return config


def load_config(path) -> MatchingConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return MatchingConfig.from_json(doc)


def save_config(config: MatchingConfig, path) -> None:
    Path(path).write_text(json.dumps(config.to_json(), indent=2) + "\n", encoding="utf-8")
