"""Seeded synthetic knowledge bases in the three-role shape.

Uses :class:`random.Random` (Mersenne Twister), whose output for a given
integer seed is the same on every platform and Python version we support.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from ..config import MatchingConfig, save_config
from ..kb import OWL_SAMEAS, OWL_THING, RDF_TYPE, RDFS_SUBCLASSOF
from ..ntriples import write_triples
from . import fixtures as fx

GEN = "http://example.org/gen/"


@dataclass(frozen=True)
class GeneratorParams:
    seed: int = 42
    n_tuples: int = 100
    n_individuals: int = 60
    n_classes: int = 15
    hierarchy_depth: int = 3
    link_density: float = 0.1
    sameas_density: float = 0.05
    unknown_rate: float = 0.3
    n_sources: int = 2
    duplicate_rate: float = 0.15

    def __post_init__(self):
        for name in ("link_density", "sameas_density", "unknown_rate", "duplicate_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        for name in ("n_individuals", "n_classes", "hierarchy_depth", "n_sources"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.n_tuples < 0:
            raise ValueError("n_tuples must be non-negative")


def _class_tree(rng: random.Random, prefix: str, count: int, depth: int) -> tuple[list[str], list[tuple[str, str]]]:
    """A random class DAG of ``count`` classes, at most ``depth`` levels deep."""
    classes: list[tuple[str, int]] = []
    edges = []
    for k in range(count):
        name = f"{GEN}{prefix}C{k}"
        candidates = [(c, d) for c, d in classes if d < depth]
        if not candidates or rng.random() < 0.25:
            classes.append((name, 1))
            edges.append((name, OWL_THING))
            continue
        parent, d = rng.choice(candidates)
        edges.append((name, parent))
        if rng.random() < 0.15:
            other, d2 = rng.choice(candidates)
            if other != parent:
                edges.append((name, other))
                d = max(d, d2)
        classes.append((name, d + 1))
    return [c for c, _ in classes], edges


def generate(params: GeneratorParams) -> tuple[list[tuple[str, str, str]], MatchingConfig]:
    rng = random.Random(params.seed)
    triples: list[tuple[str, str, str]] = list(fx._schema_triples())

    n_drug_classes = max(1, params.n_classes // 2)
    drug_classes, drug_edges = _class_tree(rng, "drug", n_drug_classes, params.hierarchy_depth)
    phen_classes, phen_edges = _class_tree(
        rng, "phen", max(1, params.n_classes - n_drug_classes), params.hierarchy_depth
    )
    triples += [(a, RDFS_SUBCLASSOF, b) for a, b in drug_edges + phen_edges]
    drug_roots = tuple(sorted(a for a, b in drug_edges if b == OWL_THING))
    phen_roots = tuple(sorted(a for a, b in phen_edges if b == OWL_THING))

    pools: dict[str, list[str]] = {role: [] for role in fx.ROLES}
    role_names = {fx.DRUG: "drug", fx.GENETIC_FACTOR: "gene", fx.PHENOTYPE: "phen"}
    for k in range(params.n_individuals):
        role = fx.ROLES[k % 3]
        e = f"{GEN}{role_names[role]}{k}"
        pools[role].append(e)
        triples.append((e, RDF_TYPE, role))
        ontology = drug_classes if role == fx.DRUG else phen_classes if role == fx.PHENOTYPE else None
        if ontology and rng.random() < 0.8:
            for c in rng.sample(ontology, rng.choice((1, 1, 2))):
                triples.append((e, RDF_TYPE, c))

    genes = pools[fx.GENETIC_FACTOR]
    for a in genes:
        for b in genes:
            if a != b and rng.random() < params.link_density / 2:
                triples.append((a, fx.PART_OF, b))
    for ph in pools[fx.PHENOTYPE]:
        if rng.random() < params.link_density:
            target_role = rng.choice((fx.PHENOTYPE, fx.DRUG))
            target = rng.choice(pools[target_role]) if pools[target_role] else None
            if target and target != ph:
                triples.append((ph, fx.DEPENDS_ON, target))
    for role, pool in pools.items():
        for e in pool:
            if len(pool) > 1 and rng.random() < params.sameas_density:
                other = rng.choice(pool)
                if other != e:
                    triples.append((e, OWL_SAMEAS, other))

    sources = [f"{GEN}source{k}" for k in range(params.n_sources)]
    made: list[dict[str, list[tuple[str, str]]]] = []
    width = len(str(max(params.n_tuples - 1, 0)))
    for k in range(params.n_tuples):
        t = f"{GEN}t{k:0{width}d}"
        triples.append((t, RDF_TYPE, fx.TUPLE_CLASS))
        triples.append((t, fx.SOURCE, rng.choice(sources)))
        if made and rng.random() < params.duplicate_rate:
            spec = dict(rng.choice(made))
            if rng.random() < 0.5:
                role = rng.choice(fx.ROLES)
                spec[role] = [] if rng.random() < 0.5 else spec[role][:1]
        else:
            spec = {}
            for role in fx.ROLES:
                pool = pools[role]
                if not pool or rng.random() < params.unknown_rate:
                    spec[role] = []
                    continue
                chosen = rng.sample(pool, min(len(pool), rng.choice((1, 1, 2, 3))))
                spec[role] = [(e, rng.choice(fx.QUALIFIERS)) for e in chosen]
        made.append(spec)
        for role, entries in spec.items():
            for e, q in entries:
                if role == fx.PHENOTYPE:
                    triples.append((t, q, e))
                else:
                    triples.append((e, q, t))

    config = fx.pgx_config(
        drug_view_roots=drug_roots,
        phenotype_view_roots=phen_roots,
        qualifiers=(fx.CAUSES, fx.IS_ASSOCIATED_WITH),
    )
    return sorted(set(triples)), config


def write_instance(params: GeneratorParams, out_dir) -> tuple[Path, Path]:
    triples, config = generate(params)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    kb_path = out / "kb.nt"
    config_path = out / "config.json"
    with open(kb_path, "w", encoding="utf-8", newline="\n") as fh:
        write_triples(fh, triples)
    save_config(config, config_path)
    return kb_path, config_path
