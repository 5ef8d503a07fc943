import pytest

from tuplematch import extract_tuples, load_kb
from tuplematch.testkit import fixtures as fx


def kb_for(triples, config=None, transitive=(fx.PART_OF,)):
    if config is not None:
        return load_kb(triples, config.reserved_vocab, top=config.top_class,
                       transitive_predicates=config.reflexive_transitive_predicates)
    return load_kb(triples, transitive_predicates=transitive)


def tuples_for(triples, config):
    kb = kb_for(triples, config)
    return kb, extract_tuples(kb, config)


@pytest.fixture
def pgx_empty_views():
    return fx.pgx_config(drug_view_roots=(), phenotype_view_roots=())


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
