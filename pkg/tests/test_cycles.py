import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringsift import (GraphError, MultiGraph, RootMode, SizeLimitError, Strategy,
                      brute_force_simple_cycles, canonical_key, enumerate_cycles,
                      filter_by_size, fundamental_cycles)

from conftest import random_multigraph, ring_graph


class TestCanonicalKey:
    def test_two_cycle_orders_endpoints(self):
        assert canonical_key([7, 3]) == (3, 7)

    def test_fixed_example(self):
        assert canonical_key([2, 0, 1]) == (0, 1, 2)
        assert canonical_key([2, 1, 0]) == (0, 1, 2)

    def test_reflection_differs_from_rotation_when_needed(self):
        # 4-cycle 0-2-1-3 is not the same cyclic order as 0-1-2-3
        assert canonical_key([0, 2, 1, 3]) != canonical_key([0, 1, 2, 3])

    def test_works_on_strings(self):
        assert canonical_key(["b", "a", "c"]) == ("a", "b", "c")

    @given(st.lists(st.integers(0, 10 ** 6), min_size=2, max_size=24, unique=True),
           st.integers(0, 100), st.booleans())
    @settings(max_examples=200, deadline=None)
    def test_rotation_reflection_invariance(self, verts, rot, flip):
        k = rot % len(verts)
        other = verts[k:] + verts[:k]
        if flip:
            other = other[::-1]
        assert canonical_key(verts) == canonical_key(other)


class TestFundamentalCycles:
    def test_c4_yields_one_four_cycle(self, c4):
        for strat in Strategy:
            t = c4.spanning_tree(0, strat)
            cs = fundamental_cycles(c4, t)
            assert len(cs) == 1
            assert cs[0].length == 4

    def test_tree_shaped_component_yields_none(self):
        g = MultiGraph(4, [(0, 1), (1, 2), (1, 3)])
        t = g.spanning_tree(0)
        assert fundamental_cycles(g, t) == []

    def test_k4_three_cycles_any_root(self, k4):
        for root in range(4):
            t = k4.spanning_tree(root, Strategy.DEPTH_FIRST)
            assert len(fundamental_cycles(k4, t)) == 3

    def test_count_law_on_random_graphs(self, rng):
        for _ in range(30):
            g = random_multigraph(rng)
            for comp in g.connected_components():
                root = int(comp[0])
                sub = g.induced_subgraph(comp)
                for strat in Strategy:
                    t = g.spanning_tree(root, strat)
                    cs = fundamental_cycles(g, t)
                    assert len(cs) == sub.edge_count - (len(comp) - 1)

    def test_parallel_pair_emits_length_two(self):
        g = MultiGraph(2, [(0, 1), (0, 1)])
        t = g.spanning_tree(0)
        cs = fundamental_cycles(g, t)
        assert len(cs) == 1
        assert cs[0].length == 2

    def test_tree_graph_mismatch(self, c4, k4):
        t = k4.spanning_tree(0)
        with pytest.raises(GraphError):
            fundamental_cycles(c4, t)

    def test_emitted_walks_are_closed(self, rng):
        for _ in range(20):
            g = random_multigraph(rng)
            t = g.spanning_tree(int(rng.integers(g.node_count)), Strategy.DEPTH_FIRST)
            for c in fundamental_cycles(g, t):
                verts = c.vertices
                pairs = {(min(u, v), max(u, v))
                         for u, v in ((g.edge_endpoints(e)) for e in range(g.edge_count))}
                for i, u in enumerate(verts):
                    v = verts[(i + 1) % len(verts)]
                    assert (min(u, v), max(u, v)) in pairs


class TestOracle:
    def test_triangle(self):
        g = ring_graph(3)
        assert brute_force_simple_cycles(g).total_count == 1

    def test_k4_seven_cycles(self, k4):
        # 4 triangles plus 3 quadrilaterals, enumerated by hand
        cs = brute_force_simple_cycles(k4)
        lengths = sorted(cs.lengths.tolist())
        assert lengths == [3, 3, 3, 3, 4, 4, 4]

    def test_tree_has_none(self):
        g = MultiGraph(5, [(0, 1), (1, 2), (2, 3), (1, 4)])
        assert brute_force_simple_cycles(g).total_count == 0

    def test_parallel_pair_counts_as_two_cycle(self):
        g = MultiGraph(3, [(0, 1), (0, 1), (1, 2)])
        cs = brute_force_simple_cycles(g)
        assert cs.total_count == 1
        assert cs.keys() == [(0, 1)]

    def test_size_guard(self):
        g = MultiGraph(17, [])
        with pytest.raises(SizeLimitError):
            brute_force_simple_cycles(g)


class TestEnumerate:
    def test_isolated_ring_found_once_every_mode(self):
        g = ring_graph(5)
        for strat in Strategy:
            for mode in RootMode:
                cs = enumerate_cycles(g, strat, mode)
                assert cs.total_count == 1
                assert cs.keys() == [(0, 1, 2, 3, 4)]

    def test_empty_graph(self):
        cs = enumerate_cycles(MultiGraph(0, []))
        assert cs.total_count == 0
        assert cs.keys() == []

    def test_two_triangles_sharing_edge(self, two_triangles_shared_edge):
        g = two_triangles_shared_edge
        oracle = {k for k in brute_force_simple_cycles(g).keys()}
        assert oracle == {(0, 1, 2), (1, 3, 2), (0, 1, 3, 2)}
        cs = enumerate_cycles(g, Strategy.BREADTH_FIRST, RootMode.ALL_ROOTS)
        assert set(cs.keys()) <= oracle

    def test_soundness_on_random_graphs(self, rng):
        for _ in range(40):
            g = random_multigraph(rng)
            oracle = set(brute_force_simple_cycles(g).keys())
            for strat in Strategy:
                for mode in RootMode:
                    for key in enumerate_cycles(g, strat, mode).keys():
                        assert key in oracle

    def test_determinism(self, rng):
        for _ in range(10):
            g = random_multigraph(rng)
            a = enumerate_cycles(g, Strategy.DEPTH_FIRST, RootMode.ALL_ROOTS)
            b = enumerate_cycles(g, Strategy.DEPTH_FIRST, RootMode.ALL_ROOTS)
            assert a == b

    def test_single_root_emission_count_matches_cyclomatic(self, rng):
        for _ in range(20):
            g = random_multigraph(rng)
            cs = enumerate_cycles(g, Strategy.BREADTH_FIRST, RootMode.SINGLE_ROOT_PER_COMPONENT)
            cyclomatic = sum(
                g.induced_subgraph(comp).edge_count - (len(comp) - 1)
                for comp in g.connected_components()
            )
            assert cs.emission_count == cyclomatic

    def test_provenance_witnesses(self):
        g = ring_graph(4)
        cs = enumerate_cycles(g, Strategy.BREADTH_FIRST, RootMode.ALL_ROOTS)
        w = cs.witnesses((0, 1, 2, 3))
        assert w == ((0, "bfs"), (1, "bfs"), (2, "bfs"), (3, "bfs"))

    def test_retain_limit_counts_but_drops_vertices(self):
        g = ring_graph(8)
        cs = enumerate_cycles(g, retain_limit=5)
        assert cs.total_count == 1
        assert cs.retained_count == 0
        assert cs.band_counts()["n_gt5_lt10"] == 1

    def test_parallel_pair_two_cycle_then_filtered(self):
        g = MultiGraph(2, [(0, 1), (0, 1)])
        cs = enumerate_cycles(g)
        assert cs.total_count == 1
        assert cs.lengths.tolist() == [2]
        assert filter_by_size(cs).total_count == 0


class TestFilterBySize:
    def test_defaults_drop_triangles(self):
        g = MultiGraph(7, [(0, 1), (1, 2), (2, 0),
                           (3, 4), (4, 5), (5, 6), (6, 3)])
        cs = enumerate_cycles(g)
        kept = filter_by_size(cs)
        assert set(kept.keys()) == {(3, 4, 5, 6)}

    def test_boundaries_are_exclusive(self):
        g50 = ring_graph(50)
        assert filter_by_size(enumerate_cycles(g50)).total_count == 0
        g49 = ring_graph(49)
        assert filter_by_size(enumerate_cycles(g49)).total_count == 1

    def test_invalid_bounds(self):
        g = ring_graph(4)
        cs = enumerate_cycles(g)
        with pytest.raises(ValueError):
            filter_by_size(cs, 5, 5)
        with pytest.raises(ValueError):
            filter_by_size(cs, 0, 50)

    def test_witnesses_survive_filtering(self):
        g = MultiGraph(7, [(0, 1), (1, 2), (2, 0),
                           (3, 4), (4, 5), (5, 6), (6, 3)])
        kept = filter_by_size(enumerate_cycles(g))
        assert len(kept.witnesses((3, 4, 5, 6))) == 4


class TestStrategyAgreement:
    def test_identical_on_chordless_rings(self):
        g = ring_graph(6, extra=[(6 + i, 6 + (i + 1) % 9) for i in range(9)])
        results = {}
        for strat in Strategy:
            for mode in RootMode:
                results[(strat, mode)] = set(enumerate_cycles(g, strat, mode).keys())
        vals = list(results.values())
        assert all(v == vals[0] for v in vals)
        assert len(vals[0]) == 2

    def test_symmetric_difference_is_reported_not_asserted(self, two_triangles_shared_edge):
        g = two_triangles_shared_edge
        bfs = enumerate_cycles(g, Strategy.BREADTH_FIRST)
        dfs = enumerate_cycles(g, Strategy.DEPTH_FIRST)
        only_b, only_d = bfs.symmetric_difference_counts(dfs)
        assert only_b >= 0 and only_d >= 0
