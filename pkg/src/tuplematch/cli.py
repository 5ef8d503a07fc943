"""Command-line entry points: ``match``, ``validate``, ``stats`` and ``gen``.

Exit status: 0 success, 1 unparsable input, 2 configuration problem,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from .config import load_config
from .errors import ConfigError, ParseError, UnknownEntityError, VocabularyError
from .kb import load_kb
from .linkio import RunReport, parse_links, read_sources, serialize_links, sidecar_path, write_sources
from .ntriples import read_triples
from .rules import RelatednessLevel, SourceMatrix, match_all
from .tuples import extract_tuples

log = logging.getLogger("tuplematch")

EXIT_OK, EXIT_PARSE, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _load(kb_path, config_path):
    config = load_config(config_path)
    triples = read_triples(kb_path)
    kb = load_kb(
        triples,
        config.reserved_vocab,
        top=config.top_class,
        transitive_predicates=config.reflexive_transitive_predicates,
    )
    return config, kb


def _guarded(fn, *args) -> int:
    try:
        return fn(*args)
    except (ParseError, VocabularyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, UnknownEntityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def cmd_match(kb_path, config_path, out_path, stats_path=None, threads=None, transitive_closure=None,
              engine="matrix") -> int:
    def run() -> int:
        started = time.perf_counter()
        config, kb = _load(kb_path, config_path)
        config.validate()
        workers = threads or os.cpu_count() or 1
        tuples = extract_tuples(kb, config, workers=workers)
        links, matrix = match_all(
            tuples, config, kb, workers=workers, transitive_closure=transitive_closure, engine=engine
        )
        out = Path(out_path)
        out.write_text(serialize_links(links), encoding="utf-8")
        write_sources(sidecar_path(out), {t.id: t.source for t in tuples})
        if stats_path:
            Path(stats_path).write_text(matrix.to_tsv(), encoding="utf-8")
        n = len(tuples)
        report = RunReport(
            tuples=n,
            pairs=n * (n - 1) // 2,
            links_per_rule={level.rule: matrix.total(level.rule) for level in RelatednessLevel},
            induced_links=sum(1 for l in links if l.induced),
            wall_time_s=round(time.perf_counter() - started, 3),
            workers=workers,
            config_digest=config.digest(),
        )
        Path(str(out) + ".report.json").write_text(report.to_json(), encoding="utf-8")
        print(report.summary())
        return EXIT_OK

    return _guarded(run)


def cmd_validate(kb_path, config_path) -> int:
    def run() -> int:
        config, kb = _load(kb_path, config_path)
        findings = config.problems() + config.kb_problems(kb)
        for f in findings:
            print(f"- {f}")
        if findings:
            return EXIT_CONFIG
        print(f"ok: {config.n} arguments, {config.m} blocks, {len(kb.individuals)} individuals")
        return EXIT_OK

    return _guarded(run)


def cmd_stats(links_path) -> int:
    def run() -> int:
        try:
            text = Path(links_path).read_text(encoding="utf-8")
            source_of = read_sources(sidecar_path(links_path))
        except OSError as exc:
            raise ParseError(f"cannot read {exc.filename}: {exc.strerror}") from None
        links = parse_links(text)
        missing = {t for l in links for t in (l.origin, l.destination)} - set(source_of)
        if missing:
            raise ParseError(f"{len(missing)} linked tuples absent from the sidecar, e.g. {min(missing)}")
        matrix = SourceMatrix.from_links(links, source_of)
        print(matrix.render(), end="")
        return EXIT_OK

    return _guarded(run)


def cmd_gen(out_dir, **params) -> int:
    from .testkit.generator import GeneratorParams, write_instance

    def run() -> int:
        try:
            gp = GeneratorParams(**params)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        kb_path, config_path = write_instance(gp, out_dir)
        print(f"wrote {kb_path} and {config_path}")
        return EXIT_OK

    return _guarded(run)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tuplematch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("match", help="match all tuples and write alignment links")
    m.add_argument("--kb", required=True)
    m.add_argument("--config", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--stats")
    m.add_argument("--threads", type=int, default=None, help="worker count (default: available cores)")
    m.add_argument("--transitive-closure", action=argparse.BooleanOptionalAction, default=None,
                   help="add transitivity-induced links (default: config value, on)")
    m.add_argument("--engine", choices=("matrix", "pairwise"), default="matrix")

    v = sub.add_parser("validate", help="check a config against a KB without matching")
    v.add_argument("--kb", required=True)
    v.add_argument("--config", required=True)

    s = sub.add_parser("stats", help="print the rule x source-pair link matrix")
    s.add_argument("links")

    g = sub.add_parser("gen", help="write a synthetic KB and config")
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--tuples", type=int, default=100)
    g.add_argument("--individuals", type=int, default=60)
    g.add_argument("--classes", type=int, default=15)
    g.add_argument("--depth", type=int, default=3)
    g.add_argument("--link-density", type=float, default=0.1)
    g.add_argument("--sameas-density", type=float, default=0.05)
    g.add_argument("--unknown-rate", type=float, default=0.3)
    g.add_argument("--sources", type=int, default=2)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "match":
        return cmd_match(args.kb, args.config, args.out, args.stats, args.threads,
                         args.transitive_closure, args.engine)
    if args.command == "validate":
        return cmd_validate(args.kb, args.config)
    if args.command == "stats":
        return cmd_stats(args.links)
    return cmd_gen(
        args.out,
        seed=args.seed,
        n_tuples=args.tuples,
        n_individuals=args.individuals,
        n_classes=args.classes,
        hierarchy_depth=args.depth,
        link_density=args.link_density,
        sameas_density=args.sameas_density,
        unknown_rate=args.unknown_rate,
        n_sources=args.sources,
    )


if __name__ == "__main__":
    sys.exit(main())
