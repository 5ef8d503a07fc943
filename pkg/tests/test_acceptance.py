"""Acceptance criteria, one test each.

Every test records a ``[PASS]`` or ``[FAIL]`` line that is printed in the
terminal summary, so ``pytest tests/test_acceptance.py`` ends with a
readable scorecard. Run the module directly for the same lines without pytest.
"""

import itertools
import time
from fractions import Fraction

import pytest

from tuplematch import (
    UNKNOWN, LinkClosure, OntoSubsumption, Subset, arg_equiv, arg_leq, extract_tuples,
    match_all, similarity,
)
from tuplematch.kb import RDF_TYPE
from tuplematch.linkio import serialize_links
from tuplematch.testkit import GeneratorParams, generate, oracle_match
from tuplematch.testkit import fixtures as fx

from conftest import ACCEPTANCE_LINES, kb_for, tuples_for
from laws import rule_law_violations
from randkb import random_kb, random_values

EX = fx.EX


def record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def s(*names):
    return frozenset(EX + n for n in names)


def test_criterion_1_part_of_link_closure():
    started = time.perf_counter()
    kb = kb_for(fx.part_of_trio())
    spec = LinkClosure(fx.PART_OF)
    got = (
        arg_leq(s("e1"), s("e1", "e2"), spec, kb),
        arg_leq(s("e3", "e2"), s("e1", "e2"), spec, kb),
        arg_leq(s("e3"), s("e1", "e2"), spec, kb),
        arg_equiv(s("e3", "e1"), s("e1"), spec, kb),
    )
    elapsed = time.perf_counter() - started
    record(1, "partOf(e3,e1) closure verdicts", got == (True,) * 4 and elapsed < 1.0,
           f"verdicts={got}, {elapsed * 1000:.1f} ms")


def test_criterion_2_class_tree_cases():
    wrong = []
    for case, (left, right, fwd, bwd) in sorted(fx.TREE_CASE_VERDICTS.items()):
        kb = kb_for(fx.class_tree_case(case))
        spec = OntoSubsumption(kb.view("o"))
        a, b = frozenset(EX + e for e in left), frozenset(EX + e for e in right)
        got = (arg_leq(a, b, spec, kb), arg_leq(b, a, spec, kb))
        if got != (fwd, bwd):
            wrong.append(f"{case}: {got} != {(fwd, bwd)}")
    record(2, "ontology preorder on the six class-tree cases", not wrong, "; ".join(wrong) or "6/6 exact")


def test_criterion_3_top_exclusion():
    kb = kb_for(fx.headache_vs_pain())
    view = kb.view("ph", fx.PAIN_ROOTS)
    head, pain = frozenset({fx.PGX + "headache"}), frozenset({fx.PGX + "pain"})
    spec = OntoSubsumption(view)
    incomparable = not arg_leq(head, pain, spec, kb) and not arg_leq(pain, head, spec, kb)
    leaky = OntoSubsumption(type(view)(view.name, view.member_classes, top_excluded=False))
    wrong_verdict = arg_leq(pain, head, leaky, kb) and not arg_leq(head, pain, leaky, kb)
    record(3, "untyped headache vs Pain-typed pain", incomparable and wrong_verdict,
           f"incomparable={incomparable}, top-included gives 'headache more general'={wrong_verdict}")


def test_criterion_4_phenotype_pair(pgx_empty_views):
    kb, ts = tuples_for(fx.phenotype_pair(), pgx_empty_views)
    links, _ = match_all(ts, pgx_empty_views, kb)
    text = serialize_links(links)
    expected = f"<{fx.PGX}pgt1> <http://www.w3.org/2004/02/skos/core#broadMatch> <{fx.PGX}pgt2> .\n"
    record(4, "phenotype pair gives one broadMatch pgt1 -> pgt2", text == expected, f"{len(links)} link(s)")


def test_criterion_5_preorder_laws():
    failures = []
    checked = 0
    for seed in range(200):
        rng, kb, inds, specs = random_kb(seed)
        values = random_values(rng, kb, inds, 6)
        for spec in specs:
            leq = {(i, j): arg_leq(values[i], values[j], spec, kb) for i in range(6) for j in range(6)}
            for i in range(6):
                if not leq[i, i]:
                    failures.append(f"seed {seed}: reflexivity of {type(spec).__name__}")
            for i, j, k in itertools.product(range(6), repeat=3):
                checked += 1
                if leq[i, j] and leq[j, k] and not leq[i, k]:
                    failures.append(f"seed {seed}: transitivity of {type(spec).__name__}")
            if isinstance(spec, Subset):
                continue
            for i, j in itertools.product(range(6), repeat=2):
                a, b = values[i], values[j]
                if a is not UNKNOWN and b is not UNKNOWN and a <= b and not leq[i, j]:
                    failures.append(f"seed {seed}: inclusion not below under {type(spec).__name__}")
    record(5, "preorder laws on 200 random KBs", not failures,
           f"{checked} transitivity triples, {len(failures)} counterexamples" + (f", first: {failures[0]}" if failures else ""))


def test_criterion_6_rule_laws():
    bad = {seed: v for seed in range(100) if (v := rule_law_violations(seed))}
    first = next(iter(bad.items()), None)
    record(6, "rule-engine laws on 100 random instances", not bad,
           f"{len(bad)} instances with violations" + (f", first: {first}" if first else ""))


@pytest.mark.slow
def test_criterion_7_oracle_equivalence():
    started = time.perf_counter()
    mismatches = []
    grid = list(itertools.product((0.0, 0.3, 0.7), (0.0, 0.1)))
    for seed in range(100):
        unknown_rate, link_density = grid[seed % len(grid)]
        params = GeneratorParams(seed=seed, n_tuples=40 + seed % 61, unknown_rate=unknown_rate,
                                 link_density=link_density)
        triples, cfg = generate(params)
        kb = kb_for(triples, cfg)
        links, _ = match_all(extract_tuples(kb, cfg), cfg, kb)
        got = {(l.origin, l.destination, int(l.level), l.induced) for l in links}
        if got != oracle_match(triples, cfg):
            mismatches.append(seed)
    elapsed = time.perf_counter() - started
    record(7, "match_all equals the naive oracle on 100 instances", not mismatches and elapsed < 300,
           f"mismatching seeds={mismatches}, {elapsed:.1f} s")


@pytest.mark.slow
def test_criterion_8_scale_and_determinism():
    params = GeneratorParams(seed=42, n_tuples=2000, n_individuals=600, n_classes=40, n_sources=4)
    triples, cfg = generate(params)
    kb = kb_for(triples, cfg)
    tuples = extract_tuples(kb, cfg, workers=4)
    started = time.perf_counter()
    links4, _ = match_all(tuples, cfg, kb, workers=4)
    elapsed = time.perf_counter() - started
    out1 = serialize_links(match_all(tuples, cfg, kb, workers=1)[0]).encode()
    out8 = serialize_links(match_all(tuples, cfg, kb, workers=8)[0]).encode()
    same = out1 == out8 == serialize_links(links4).encode()
    n = len(tuples)
    record(8, "2,000 tuples under 60 s on 4 workers, identical output for 1 and 8",
           n == 2000 and elapsed < 60 and same,
           f"{n * (n - 1) // 2} pairs, {len(links4)} links, {elapsed:.1f} s, identical={same}")


def test_criterion_9_similarity_values():
    kb = kb_for([(EX + x, RDF_TYPE, EX + "Thing") for x in "abc"])
    got = (similarity(s("a"), s("a", "b"), Subset(), kb),
           similarity(s("a"), s("b"), Subset(), kb),
           similarity(s("a", "b"), s("a", "c"), Subset(), kb))
    record(9, "similarity is exactly 1, 0 and 1/3", got == (1, 0, Fraction(1, 3)), ", ".join(map(str, got)))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
