import pytest

from lexikernel.graph import DefGraph, build_graph
from lexikernel.lexicon import Lexicon, LexiconEntry


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance" in report.nodeid:
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE {status}: {name}", flush=True)


def make_lexicon(defs: dict[str, set[str]], closed: bool = True) -> Lexicon:
    entries = {w: LexiconEntry(w, 1, frozenset(d)) for w, d in defs.items()}
    return Lexicon(entries, closed=closed)


def graph_from_arcs(vertices, arcs) -> DefGraph:
    return DefGraph.from_arcs(vertices, arcs)


# Two hand-checked dictionaries used all over the suite. F1's only cycle is
# a<->b with c hanging off it; F2 adds a second 2-cycle c<->d and a sink e.
F1_DEFS = {"a": {"b"}, "b": {"a"}, "c": {"a", "b"}}
F2_DEFS = {"a": {"b"}, "b": {"a"}, "c": {"d", "a"}, "d": {"c", "b"}, "e": {"c", "d"}}


@pytest.fixture
def f1_lexicon() -> Lexicon:
    return make_lexicon(F1_DEFS)


@pytest.fixture
def f2_lexicon() -> Lexicon:
    return make_lexicon(F2_DEFS)


@pytest.fixture
def f1_graph(f1_lexicon) -> DefGraph:
    return build_graph(f1_lexicon)


@pytest.fixture
def f2_graph(f2_lexicon) -> DefGraph:
    return build_graph(f2_lexicon)
