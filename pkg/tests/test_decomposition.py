import random

import pytest

from lexikernel.decomposition import (
    Label,
    StructureReport,
    decompose_full,
    extract_kernel,
    is_def_closed,
    split_core_satellites,
)
from lexikernel.graph import DefGraph, build_graph, vertices_reaching_cycle

import oracles
from conftest import make_lexicon


class TestExtractKernel:
    def test_f1(self, f1_graph):
        assert extract_kernel(f1_graph) == {"a", "b"}

    def test_f2(self, f2_graph):
        assert extract_kernel(f2_graph) == {"a", "b", "c", "d"}

    def test_acyclic_graph_empty_kernel(self):
        g = DefGraph.from_arcs(["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert extract_kernel(g) == frozenset()

    def test_matches_cycle_reachability_on_random_graphs(self):
        for seed in range(30):
            rng = random.Random(3000 + seed)
            vertices, arcs = oracles.random_arcs(rng, rng.randint(1, 60), 0.05, self_loop_rate=0.02)
            g = DefGraph.from_arcs(vertices, arcs)
            assert extract_kernel(g) == vertices_reaching_cycle(g)

    def test_order_invariance(self):
        for seed in range(10):
            rng = random.Random(4000 + seed)
            vertices, arcs = oracles.random_arcs(rng, rng.randint(2, 30), 0.1)
            g = DefGraph.from_arcs(vertices, arcs)
            kernel = extract_kernel(g)
            for _ in range(5):
                order = list(vertices)
                rng.shuffle(order)
                assert oracles.prune_sinks_in_order(vertices, arcs, order) == kernel


class TestSplitCoreSatellites:
    def test_f2(self, f2_graph):
        core, satellites, components = split_core_satellites(
            f2_graph, extract_kernel(f2_graph)
        )
        assert core == {"a", "b"}
        assert satellites == {"c", "d"}
        assert components == [frozenset({"a", "b"})]

    def test_single_scc_kernel(self):
        g = build_graph(make_lexicon({"a": {"b"}, "b": {"a"}}))
        core, satellites, components = split_core_satellites(g, extract_kernel(g))
        assert core == {"a", "b"}
        assert satellites == frozenset()
        assert len(components) == 1

    def test_two_disjoint_cycles_both_core(self):
        lex = make_lexicon({"a": {"b"}, "b": {"a"}, "c": {"d"}, "d": {"c"}})
        g = build_graph(lex)
        core, satellites, components = split_core_satellites(g, extract_kernel(g))
        assert core == {"a", "b", "c", "d"}
        assert satellites == frozenset()
        assert len(components) == 2  # core need not be a single SCC

    def test_non_fixed_point_rejected(self, f2_graph):
        with pytest.raises(ValueError):
            split_core_satellites(f2_graph, frozenset({"a", "b", "c", "d", "e"}))

    def test_empty_definition_feeding_a_cycle_is_flagged(self):
        # A word defined by nothing that nonetheless defines cycle members
        # would become an acyclic source component; reject it loudly.
        lex = make_lexicon({"a": frozenset(), "b": {"a", "c"}, "c": {"b"}})
        g = build_graph(lex)
        with pytest.raises(ValueError, match="empty definition"):
            split_core_satellites(g, extract_kernel(g))

    def test_core_receives_no_arc_from_satellites(self, f2_graph):
        core, satellites, _ = split_core_satellites(f2_graph, extract_kernel(f2_graph))
        for u in satellites:
            for v in f2_graph.out_arcs(u):
                assert v not in core


class TestDecomposeFull:
    def test_f2_counts_and_percentages(self, f2_lexicon):
        _, report = decompose_full(f2_lexicon)
        record = report.to_record()
        assert record["total_words"] == 5
        assert record["kernel_words"] == 4
        assert record["kernel_pct_of_total"] == 80
        assert record["satellite_words"] == 2
        assert record["satellite_pct_of_kernel"] == 50
        assert record["core_words"] == 2
        assert record["core_pct_of_kernel"] == 50
        assert record["core_is_single_scc"] is True

    def test_f2_labels(self, f2_lexicon):
        decomposition, _ = decompose_full(f2_lexicon)
        assert decomposition.label == {
            "a": Label.CORE,
            "b": Label.CORE,
            "c": Label.SATELLITE,
            "d": Label.SATELLITE,
            "e": Label.OUTSIDE,
        }
        assert decomposition.kernel == {"a", "b", "c", "d"}

    def test_empty_lexicon(self):
        _, report = decompose_full(make_lexicon({}))
        record = report.to_record()
        assert record["total_words"] == 0
        assert record["kernel_words"] == 0
        assert record["core_words"] == 0

    def test_kernel_and_core_are_def_closed(self, f1_lexicon, f2_lexicon):
        for lex in (f1_lexicon, f2_lexicon):
            decomposition, _ = decompose_full(lex)
            assert is_def_closed(lex, decomposition.kernel)
            assert is_def_closed(lex, decomposition.core)

    def test_requires_closed(self):
        with pytest.raises(ValueError):
            decompose_full(make_lexicon({"a": {"b"}}, closed=False))


class TestIsDefClosed:
    def test_f2_core(self, f2_lexicon):
        assert is_def_closed(f2_lexicon, frozenset({"a", "b"}))

    def test_f2_satellites_not_closed(self, f2_lexicon):
        assert not is_def_closed(f2_lexicon, frozenset({"c", "d"}))

    def test_full_headword_set(self, f2_lexicon):
        assert is_def_closed(f2_lexicon, frozenset(f2_lexicon.headwords()))

    def test_unknown_word(self, f2_lexicon):
        with pytest.raises(ValueError, match="zzz"):
            is_def_closed(f2_lexicon, frozenset({"zzz"}))


class TestStructureReport:
    def test_percentages_round_half_up(self):
        report = StructureReport(
            total_words=8,
            kernel_words=1,
            satellite_words=0,
            core_words=1,
            core_is_single_scc=True,
            kernel_is_grounding_set=True,
        )
        assert report.to_record()["kernel_pct_of_total"] == 13  # 12.5 rounds up

    def test_count_consistency_enforced(self):
        with pytest.raises(ValueError):
            StructureReport(
                total_words=5,
                kernel_words=4,
                satellite_words=1,
                core_words=1,
                core_is_single_scc=True,
                kernel_is_grounding_set=True,
            )

    def test_text_table_mentions_layers(self, f2_lexicon):
        _, report = decompose_full(f2_lexicon)
        text = report.to_text()
        assert "whole dictionary (D)" in text
        assert "kernel (K)" in text
        assert "satellites (S)" in text
        assert "core (C)" in text
