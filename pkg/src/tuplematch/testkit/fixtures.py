"""Small hand-built knowledge bases mirroring the worked examples.

Each builder returns raw triples (plus a config where a matching run makes
sense) so tests can feed them to both the engine and the oracle.
"""

from __future__ import annotations

from fractions import Fraction

from ..config import MEMBER_TO_TUPLE, TUPLE_TO_MEMBER, ArgumentSchema, Block, MatchingConfig, PreorderDecl
from ..kb import OWL_SAMEAS, OWL_THING, RDF_TYPE, RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF

EX = "http://example.org/"
PGXO = "http://pgxo.loria.fr/"
PGX = "http://example.org/pgx/"

TUPLE_CLASS = PGXO + "PharmacogenomicRelationship"
DRUG = PGXO + "Drug"
GENETIC_FACTOR = PGXO + "GeneticFactor"
PHENOTYPE = PGXO + "Phenotype"
CAUSES = PGXO + "causes"
INFLUENCES = PGXO + "influences"
IS_ASSOCIATED_WITH = PGXO + "isAssociatedWith"
PART_OF = PGXO + "partOf"
DEPENDS_ON = PGXO + "dependsOn"
SOURCE = PGXO + "source"

ROLES = (DRUG, GENETIC_FACTOR, PHENOTYPE)
QUALIFIERS = (CAUSES, INFLUENCES, IS_ASSOCIATED_WITH)


def ex(name: str) -> str:
    return EX + name


def pgx_config(
    *,
    drug_view_roots: tuple[str, ...] | None = None,
    phenotype_view_roots: tuple[str, ...] | None = None,
    qualifiers: tuple[str, ...] = QUALIFIERS,
) -> MatchingConfig:
    """The three-role layout: one argument per (role, qualifying predicate).

    Genetic factors compare through ``partOf``; drugs and phenotypes through
    their ontology views. Aggregation groups arguments by role and follows
    ``dependsOn`` from phenotypes.
    """
    arguments = []
    blocks = []
    preorders = {
        DRUG: PreorderDecl("onto", "drug"),
        GENETIC_FACTOR: PreorderDecl("link", PART_OF),
        PHENOTYPE: PreorderDecl("onto", "phenotype"),
    }
    index = 1
    for role in ROLES:
        direction = TUPLE_TO_MEMBER if role == PHENOTYPE else MEMBER_TO_TUPLE
        block = []
        for q in qualifiers:
            arguments.append(ArgumentSchema(index, role, q, direction, preorders[role]))
            block.append(index)
            index += 1
        deps = (DEPENDS_ON,) if role == PHENOTYPE else ()
        blocks.append(Block(tuple(block), preorders[role], deps))
    return MatchingConfig(
        tuple_class=TUPLE_CLASS,
        arguments=tuple(arguments),
        partition=tuple(blocks),
        gamma_unknown=3,
        gamma_sim=Fraction(4, 5),
        gamma_comp=2,
        source_predicate=SOURCE,
        reflexive_transitive_predicates=(PART_OF,),
        views={"drug": drug_view_roots, "phenotype": phenotype_view_roots},
    )


def _schema_triples() -> list[tuple[str, str, str]]:
    return [
        (CAUSES, RDFS_SUBPROPERTYOF, INFLUENCES),
        (INFLUENCES, RDFS_SUBPROPERTYOF, IS_ASSOCIATED_WITH),
        (TUPLE_CLASS, RDFS_SUBCLASSOF, OWL_THING),
        (DRUG, RDFS_SUBCLASSOF, OWL_THING),
        (GENETIC_FACTOR, RDFS_SUBCLASSOF, OWL_THING),
        (PHENOTYPE, RDFS_SUBCLASSOF, OWL_THING),
    ]


def warfarin_cardio() -> list[tuple[str, str, str]]:
    """pgt_1 relating warfarin, CYP2C9 and cardiovascular diseases via ``causes``."""
    t = PGX + "pgt_1"
    return _schema_triples() + [
        (t, RDF_TYPE, TUPLE_CLASS),
        (PGX + "warfarin", RDF_TYPE, DRUG),
        (PGX + "CYP2C9", RDF_TYPE, GENETIC_FACTOR),
        (PGX + "cardiovascular_diseases", RDF_TYPE, PHENOTYPE),
        (PGX + "warfarin", CAUSES, t),
        (PGX + "CYP2C9", CAUSES, t),
        (t, CAUSES, PGX + "cardiovascular_diseases"),
        (t, SOURCE, PGX + "PharmGKB-ca"),
    ]


def warfarin_copy_without_gene() -> list[tuple[str, str, str]]:
    """pgt_1 plus a copy of pgt_1 whose genetic factor is not given."""
    t = PGX + "pgt_1_copy"
    return warfarin_cardio() + [
        (t, RDF_TYPE, TUPLE_CLASS),
        (PGX + "warfarin", CAUSES, t),
        (t, CAUSES, PGX + "cardiovascular_diseases"),
        (t, SOURCE, PGX + "Literature"),
    ]


def part_of_trio() -> list[tuple[str, str, str]]:
    """Three individuals with e3 part of e1."""
    return [
        (ex("e1"), RDF_TYPE, ex("Thing")),
        (ex("e2"), RDF_TYPE, ex("Thing")),
        (ex("e3"), PART_OF, ex("e1")),
    ]


# Class tree for the ontology preorder cases: c1 has children c2, c4, c3; c2 -> c5, c6; c4 -> c10, c11;
# c3 -> c7 -> c8 -> c9 (arrows point from subclass to superclass).
_TREE_EDGES = [
    ("c2", "c1"), ("c4", "c1"), ("c3", "c1"),
    ("c5", "c2"), ("c6", "c2"),
    ("c10", "c4"), ("c11", "c4"),
    ("c7", "c3"), ("c8", "c7"), ("c9", "c8"),
]

TREE_CASE_TYPES = {
    "a": {"e1": ["c8"], "e2": ["c7"], "e3": ["c9"]},
    "b": {"e1": ["c8", "c6"], "e2": ["c8"], "e3": ["c2"]},
    "c": {"e1": ["c11"], "e2": ["c4"], "e3": ["c2"]},
    "d": {"e1": ["c11"], "e2": ["c4", "c2"]},
    "e": {"e1": ["c10", "c2"], "e2": ["c4"]},
    "f": {"e1": ["c8"], "e2": ["c8"]},
}

# (left, right, left <= right, right <= left)
TREE_CASE_VERDICTS = {
    "a": (["e1"], ["e2", "e3"], True, False),
    "b": (["e1"], ["e2", "e3"], True, False),
    "c": (["e1"], ["e2", "e3"], True, False),
    "d": (["e1"], ["e2"], True, False),
    "e": (["e1"], ["e2"], False, False),
    "f": (["e1"], ["e2"], True, True),
}


def class_tree_case(case: str) -> list[tuple[str, str, str]]:
    triples = [(ex(a), RDFS_SUBCLASSOF, ex(b)) for a, b in _TREE_EDGES]
    triples.append((ex("c1"), RDFS_SUBCLASSOF, OWL_THING))
    for e, classes in TREE_CASE_TYPES[case].items():
        triples.extend((ex(e), RDF_TYPE, ex(c)) for c in classes)
    return triples


def headache_vs_pain() -> list[tuple[str, str, str]]:
    """Two tuples sharing drug and gene; one names an untyped headache, the
    other a pain typed with Pain, where Headache is below Pain."""
    mesh = "http://example.org/mesh/"
    triples = _schema_triples() + [
        (mesh + "Headache", RDFS_SUBCLASSOF, mesh + "Pain"),
        (mesh + "Pain", RDFS_SUBCLASSOF, OWL_THING),
        (PGX + "warfarin", RDF_TYPE, DRUG),
        (PGX + "CYP2C9", RDF_TYPE, GENETIC_FACTOR),
        (PGX + "headache", RDF_TYPE, PHENOTYPE),
        (PGX + "pain", RDF_TYPE, PHENOTYPE),
        (PGX + "pain", RDF_TYPE, mesh + "Pain"),
    ]
    for t, ph in (("pgt1", "headache"), ("pgt2", "pain")):
        triples += [
            (PGX + t, RDF_TYPE, TUPLE_CLASS),
            (PGX + "warfarin", CAUSES, PGX + t),
            (PGX + "CYP2C9", CAUSES, PGX + t),
            (PGX + t, CAUSES, PGX + ph),
        ]
    return triples


PAIN_ROOTS = ("http://example.org/mesh/Pain",)


def phenotype_pair() -> list[tuple[str, str, str]]:
    """pgt1 causes ph1 and is associated with ph2; pgt2 is associated with both."""
    triples = _schema_triples() + [
        (PGX + "warfarin", RDF_TYPE, DRUG),
        (PGX + "CYP2C9", RDF_TYPE, GENETIC_FACTOR),
        (PGX + "ph1", RDF_TYPE, PHENOTYPE),
        (PGX + "ph2", RDF_TYPE, PHENOTYPE),
        (PGX + "pgt1", CAUSES, PGX + "ph1"),
        (PGX + "pgt1", IS_ASSOCIATED_WITH, PGX + "ph2"),
        (PGX + "pgt2", IS_ASSOCIATED_WITH, PGX + "ph1"),
        (PGX + "pgt2", IS_ASSOCIATED_WITH, PGX + "ph2"),
        (PGX + "pgt1", SOURCE, PGX + "PharmGKB-ca"),
        (PGX + "pgt2", SOURCE, PGX + "PharmGKB-sd"),
    ]
    for t in ("pgt1", "pgt2"):
        triples += [
            (PGX + t, RDF_TYPE, TUPLE_CLASS),
            (PGX + "warfarin", CAUSES, PGX + t),
            (PGX + "CYP2C9", CAUSES, PGX + t),
        ]
    return triples


def warfarin_hemorrhage() -> list[tuple[str, str, str]]:
    """A tuple whose phenotype depends on another phenotype and on a drug."""
    t = PGX + "pgt_wh"
    return _schema_triples() + [
        (t, RDF_TYPE, TUPLE_CLASS),
        (PGX + "CYP2C9", RDF_TYPE, GENETIC_FACTOR),
        (PGX + "warfarin", RDF_TYPE, DRUG),
        (PGX + "aspirin", RDF_TYPE, DRUG),
        (PGX + "hemorrhage", RDF_TYPE, PHENOTYPE),
        (PGX + "warfarin_caused_hemorrhage", RDF_TYPE, PHENOTYPE),
        (PGX + "warfarin_caused_hemorrhage", DEPENDS_ON, PGX + "hemorrhage"),
        (PGX + "warfarin_caused_hemorrhage", DEPENDS_ON, PGX + "warfarin"),
        (PGX + "aspirin", CAUSES, t),
        (PGX + "CYP2C9", CAUSES, t),
        (t, CAUSES, PGX + "warfarin_caused_hemorrhage"),
    ]


def identical_triplet() -> list[tuple[str, str, str]]:
    """Three tuples with the same drug, gene and phenotype."""
    triples = _schema_triples() + [
        (PGX + "warfarin", RDF_TYPE, DRUG),
        (PGX + "CYP2C9", RDF_TYPE, GENETIC_FACTOR),
        (PGX + "bleeding", RDF_TYPE, PHENOTYPE),
    ]
    for t in ("ta", "tb", "tc"):
        triples += [
            (PGX + t, RDF_TYPE, TUPLE_CLASS),
            (PGX + "warfarin", CAUSES, PGX + t),
            (PGX + "CYP2C9", CAUSES, PGX + t),
            (PGX + t, CAUSES, PGX + "bleeding"),
            (PGX + t, SOURCE, PGX + "Literature"),
        ]
    return triples


def more_specific_chain() -> list[tuple[str, str, str]]:
    """ta <= tb <= tc: each step drops one specified argument."""
    triples = identical_triplet()
    drop = {
        (PGX + "CYP2C9", CAUSES, PGX + "tb"),
        (PGX + "CYP2C9", CAUSES, PGX + "tc"),
        (PGX + "tc", CAUSES, PGX + "bleeding"),
    }
    return [t for t in triples if t not in drop]


SAME_AS = OWL_SAMEAS
