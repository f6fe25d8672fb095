import random

import pytest
from hypothesis import given, settings, strategies as st

from robham.digraph import Digraph, verify_path
from robham.errors import BackwardBlocked, EndpointClash, LayerStalled
from robham.expansion import ExpansionParams
from robham.generate import complete_digraph, random_digraph
from robham.pathfind import (
    AlternatingPath,
    build_alternating_path,
    build_disjoint_paths,
    build_path,
)

from conftest import triangle

P = ExpansionParams(mu=0.1, nu=0.1, tau=0.25, gamma=0.3)


class TestAlternatingPathType:
    def test_edge_pattern(self):
        # [a b c d]: edges a->b (pos 1), c->b (pos 2), c->d (pos 3)
        ap = AlternatingPath((0, 1, 2, 3))
        assert ap.edges() == [(0, 1), (2, 1), (2, 3)]

    def test_odd_count_rejected(self):
        with pytest.raises(Exception):
            AlternatingPath((0, 1, 2))

    def test_validate_against_graph(self):
        g = Digraph.from_edges(4, [(0, 1), (2, 1), (2, 3)])
        assert AlternatingPath((0, 1, 2, 3)).validate(g)
        g2 = Digraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert not AlternatingPath((0, 1, 2, 3)).validate(g2)


class TestBuildPath:
    def test_complete_any_valid(self, k4):
        path = build_path(k4, 0, 3, ExpansionParams(0.25, 0.25, 0.25, 0.3), 5)
        assert verify_path(k4, path)
        assert path[0] == 0 and path[-1] == 3
        assert len(path) <= 5

    def test_triangle_unique_path(self):
        # brute force: the only 0 -> 2 path is 0,1,2 (tau = 2/3 keeps the
        # single-vertex layer above the (1-tau)*n target)
        path = build_path(triangle(), 0, 2, ExpansionParams(1 / 3, 1 / 3, 2 / 3, 0.3), 3)
        assert path == [0, 1, 2]

    def test_tight_window_stalls_on_triangle(self):
        # with tau = 1/3 the target is 2 but layers stay single vertices
        with pytest.raises(LayerStalled):
            build_path(triangle(), 0, 2, ExpansionParams(1 / 3, 1 / 3, 1 / 3, 0.3), 3)

    def test_same_endpoints_rejected(self, k4):
        with pytest.raises(EndpointClash):
            build_path(k4, 0, 0, P, 5)

    def test_stall_structured(self):
        # 0 -> 1 only: layers stick at {1}
        g = Digraph.from_edges(4, [(0, 1)])
        with pytest.raises(LayerStalled):
            build_path(g, 0, 2, P, 6)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_random_dense_valid(self, seed):
        g = random_digraph(30, 0.6, seed)
        rng = random.Random(seed)
        u, v = rng.sample(range(30), 2)
        path = build_path(g, u, v, P, 12)
        assert verify_path(g, path)
        assert path[0] == u and path[-1] == v

    def test_deterministic(self):
        g = random_digraph(30, 0.6, 11)
        assert build_path(g, 0, 7, P, 12) == build_path(g, 0, 7, P, 12)


class TestBuildAlternatingPath:
    def test_complete(self):
        g = complete_digraph(12)
        ap = build_alternating_path(g, 0, 1, P, 12)
        assert ap.vertices[0] == 0 and ap.vertices[-1] == 1
        assert len(ap.vertices) % 2 == 0
        assert len(ap.vertices) <= 12
        assert ap.validate(g)

    def test_blocked_when_sink_has_no_inneighbors(self):
        g = complete_digraph(12)
        # strip every edge into vertex 11
        h = Digraph(12)
        for u, v in g.edges():
            if v != 11:
                h.add_edge(u, v)
        with pytest.raises(BackwardBlocked):
            build_alternating_path(h, 0, 11, P, 14)

    def test_same_endpoints_rejected(self, k4):
        with pytest.raises(EndpointClash):
            build_alternating_path(k4, 2, 2, P, 8)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_random_dense_alternation(self, seed):
        g = random_digraph(30, 0.6, seed)
        rng = random.Random(seed)
        u, v = rng.sample(range(30), 2)
        ap = build_alternating_path(g, u, v, P, 16)
        assert ap.validate(g)
        assert ap.vertices[0] == u and ap.vertices[-1] == v
        # directions strictly alternate, edge by edge
        edges = ap.edges()
        for idx, (a, b) in enumerate(edges):
            assert g.has_edge(a, b)
            if idx % 2 == 0:
                assert (a, b) == (ap.vertices[idx], ap.vertices[idx + 1])
            else:
                assert (a, b) == (ap.vertices[idx + 1], ap.vertices[idx])


class TestDisjointPaths:
    def test_two_paths_disjoint(self):
        g = complete_digraph(8)
        paths = build_disjoint_paths(g, [(0, 1), (2, 3)], P, 4)
        assert len(paths) == 2
        assert verify_path(g, paths[0]) and verify_path(g, paths[1])
        assert paths[0][0] == 0 and paths[0][-1] == 1
        assert paths[1][0] == 2 and paths[1][-1] == 3
        assert not (set(paths[0]) & set(paths[1]))

    def test_empty_request(self, k4):
        assert build_disjoint_paths(k4, [], P) == []

    def test_endpoint_clash(self, k4):
        with pytest.raises(EndpointClash):
            build_disjoint_paths(k4, [(0, 1), (1, 2)], P)

    def test_failure_tagged_with_index(self):
        g = complete_digraph(10)
        h = Digraph(10)
        for u, v in g.edges():
            if v != 9:
                h.add_edge(u, v)  # vertex 9 unreachable
        try:
            build_disjoint_paths(h, [(0, 1), (2, 9)], P)
            assert False, "expected a failure"
        except Exception as exc:
            assert getattr(exc, "path_index", None) == 1

    @given(st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_random_many_pairs(self, seed):
        g = random_digraph(40, 0.6, seed)
        rng = random.Random(seed)
        ids = rng.sample(range(40), 6)
        pairs = [(ids[0], ids[1]), (ids[2], ids[3]), (ids[4], ids[5])]
        paths = build_disjoint_paths(g, pairs, P, 12)
        seen = set()
        for (a, b), path in zip(pairs, paths):
            assert verify_path(g, path)
            assert path[0] == a and path[-1] == b
            assert not (seen & set(path))
            seen.update(path)
