import random

import pytest

from tuplematch import UNKNOWN, aggregate, extract_tuples, load_kb
from tuplematch.errors import ConfigError
from tuplematch.testkit import fixtures as fx
from tuplematch.tuples import aggregate_all

from conftest import kb_for, tuples_for

P = fx.PGX


def arg(config, role, predicate):
    return next(a.index for a in config.arguments if a.role_class == role and a.predicate == predicate) - 1


def test_single_relationship_extraction(pgx_empty_views):
    cfg = pgx_empty_views
    kb, ts = tuples_for(fx.warfarin_cardio(), cfg)
    (t,) = ts
    assert t.id == P + "pgt_1"
    assert t.source == P + "PharmGKB-ca"
    assert t.args[arg(cfg, fx.PHENOTYPE, fx.CAUSES)] == {P + "cardiovascular_diseases"}
    assert t.args[arg(cfg, fx.DRUG, fx.CAUSES)] == {P + "warfarin"}
    # predicate hierarchy: causes links count for the broader qualifiers too
    assert t.args[arg(cfg, fx.GENETIC_FACTOR, fx.IS_ASSOCIATED_WITH)] == {P + "CYP2C9"}


def test_qualifier_hierarchy_projection(pgx_empty_views):
    cfg = pgx_empty_views
    _, ts = tuples_for(fx.phenotype_pair(), cfg)
    pgt1 = next(t for t in ts if t.id == P + "pgt1")
    assert pgt1.args[arg(cfg, fx.PHENOTYPE, fx.IS_ASSOCIATED_WITH)] == {P + "ph1", P + "ph2"}
    assert pgt1.args[arg(cfg, fx.PHENOTYPE, fx.CAUSES)] == {P + "ph1"}
    pgt2 = next(t for t in ts if t.id == P + "pgt2")
    assert pgt2.args[arg(cfg, fx.PHENOTYPE, fx.CAUSES)] is UNKNOWN


def test_missing_gene_is_unknown(pgx_empty_views):
    cfg = pgx_empty_views
    _, ts = tuples_for(fx.warfarin_copy_without_gene(), cfg)
    copy = next(t for t in ts if t.id.endswith("pgt_1_copy"))
    assert copy.args[arg(cfg, fx.GENETIC_FACTOR, fx.CAUSES)] is UNKNOWN


def test_closed_marker_gives_empty_set(pgx_empty_views):
    import dataclasses
    closed = P + "closed"
    marker = P + "gene-causes"
    args = tuple(dataclasses.replace(a, iri=marker) if a.role_class == fx.GENETIC_FACTOR and a.predicate == fx.CAUSES
                 else a for a in pgx_empty_views.arguments)
    cfg = dataclasses.replace(pgx_empty_views, arguments=args, closed_predicate=closed)
    triples = fx.warfarin_copy_without_gene() + [(P + "pgt_1_copy", closed, marker)]
    _, ts = tuples_for(triples, cfg)
    copy = next(t for t in ts if t.id.endswith("pgt_1_copy"))
    assert copy.args[arg(cfg, fx.GENETIC_FACTOR, fx.CAUSES)] == frozenset()


def test_role_class_filters_members(pgx_empty_views):
    # a drug-typed individual on the phenotype side is not a phenotype
    triples = fx.warfarin_cardio() + [(P + "pgt_1", fx.CAUSES, P + "warfarin")]
    _, (t,) = tuples_for(triples, pgx_empty_views)
    assert t.args[arg(pgx_empty_views, fx.PHENOTYPE, fx.CAUSES)] == {P + "cardiovascular_diseases"}


def test_no_tuple_class(pgx_empty_views):
    kb = load_kb(fx.part_of_trio())
    assert extract_tuples(kb, pgx_empty_views) == []


def test_unknown_role_class(pgx_empty_views):
    import dataclasses
    args = (dataclasses.replace(pgx_empty_views.arguments[0], role_class=P + "Nope"),) + pgx_empty_views.arguments[1:]
    cfg = dataclasses.replace(pgx_empty_views, arguments=args)
    with pytest.raises(ConfigError):
        extract_tuples(kb_for(fx.warfarin_cardio(), cfg), cfg)


def test_aggregation_union_and_unknown(pgx_empty_views):
    cfg = pgx_empty_views
    kb, ts = tuples_for(fx.phenotype_pair(), cfg)
    pgt1 = next(t for t in ts if t.id == P + "pgt1")
    assert aggregate(pgt1, 2, cfg, kb) == {P + "ph1", P + "ph2"}
    assert aggregate(pgt1, 0, cfg, kb) == {P + "warfarin"}
    kb2, ts2 = tuples_for(fx.more_specific_chain(), cfg)
    tc = next(t for t in ts2 if t.id == P + "tc")
    assert aggregate(tc, 1, cfg, kb2) is UNKNOWN
    with pytest.raises(ConfigError):
        aggregate(tc, 3, cfg, kb2)


def test_dependency_expansion(pgx_empty_views):
    cfg = pgx_empty_views
    kb, (t,) = tuples_for(fx.warfarin_hemorrhage(), cfg)
    drugs, genes, phens = aggregate_all(t, cfg, kb)
    assert phens == {P + "warfarin_caused_hemorrhage", P + "hemorrhage"}
    assert drugs == {P + "aspirin", P + "warfarin"}
    assert genes == {P + "CYP2C9"}


def test_extraction_ignores_triple_order(pgx_empty_views):
    triples = fx.phenotype_pair() + fx.more_specific_chain()
    shuffled = list(triples)
    random.Random(11).shuffle(shuffled)
    assert tuples_for(triples, pgx_empty_views)[1] == tuples_for(shuffled, pgx_empty_views)[1]


def test_extraction_is_monotone_in_links(pgx_empty_views):
    cfg = pgx_empty_views
    _, before = tuples_for(fx.phenotype_pair(), cfg)
    _, after = tuples_for(fx.phenotype_pair() + [(P + "ph3", "http://www.w3.org/1999/02/22-rdf-syntax-ns#type", fx.PHENOTYPE),
                                              (P + "pgt2", fx.CAUSES, P + "ph3")], cfg)
    for old, new in zip(before, after):
        for x, y in zip(old.args, new.args):
            assert x is UNKNOWN or (y is not UNKNOWN and x <= y)


def test_workers_do_not_change_extraction(pgx_empty_views):
    from tuplematch.testkit import GeneratorParams, generate
    triples, cfg = generate(GeneratorParams(seed=5, n_tuples=40))
    kb = kb_for(triples, cfg)
    assert extract_tuples(kb, cfg, workers=1) == extract_tuples(kb, cfg, workers=4)
