import pytest
from hypothesis import given, strategies as st

from robham.digraph import (
    Digraph,
    canonical_cycle,
    format_edge_list,
    parse_edge_list,
    verify_cycle,
    verify_hamilton,
    verify_path,
)
from robham.errors import LoopRejected, OutOfRange, ParseError
from robham.generate import complete_digraph, random_digraph

from conftest import triangle


class TestAddEdge:
    def test_insert(self):
        g = Digraph(3).add_edge(0, 1)
        assert g.has_edge(0, 1)
        assert g.m == 1
        assert g.out_neighbors(0) == (1,)
        assert g.in_neighbors(1) == (0,)

    def test_loop_rejected(self):
        with pytest.raises(LoopRejected):
            Digraph(3).add_edge(0, 0)

    def test_idempotent(self):
        g = Digraph(3).add_edge(0, 1).add_edge(0, 1)
        assert g.m == 1
        assert g == Digraph(3).add_edge(0, 1)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            Digraph(3).add_edge(0, 3)
        with pytest.raises(OutOfRange):
            Digraph(3).add_edge(-1, 0)


class TestDegrees:
    def test_triangle(self):
        assert triangle().min_semi_degree() == 1

    def test_complete(self):
        assert complete_digraph(4).min_semi_degree() == 3

    def test_isolated_vertex(self):
        g = Digraph.from_edges(3, [(0, 1), (1, 0)])
        assert g.min_semi_degree() == 0


class TestDeleteVertices:
    def test_triangle_minus_one(self):
        sub, vmap = triangle().delete_vertices({2})
        assert sub.n == 2
        assert list(sub.edges()) == [(0, 1)]
        assert vmap.new_to_old == (0, 1)

    def test_empty_deletion_is_identity(self):
        g = triangle()
        sub, vmap = g.delete_vertices(set())
        assert sub == g
        assert vmap.old_to_new == (0, 1, 2)

    def test_delete_all(self):
        sub, _ = triangle().delete_vertices({0, 1, 2})
        assert sub.n == 0

    @given(st.integers(0, 10**6))
    def test_induced_subgraph_property(self, seed):
        g = random_digraph(9, 0.4, seed)
        import random as _r

        rng = _r.Random(seed)
        drop = set(rng.sample(range(9), 4))
        sub, vmap = g.delete_vertices(drop)
        for u in range(g.n):
            for v in range(g.n):
                if u == v or u in drop or v in drop:
                    continue
                assert g.has_edge(u, v) == sub.has_edge(
                    vmap.old_to_new[u], vmap.old_to_new[v]
                )


class TestTransposeConsistency:
    @given(st.integers(0, 10**6))
    def test_in_is_transpose_of_out(self, seed):
        g = random_digraph(8, 0.5, seed)
        for u in range(g.n):
            for v in range(g.n):
                if u == v:
                    continue
                assert (v in g.out_neighbors(u)) == (u in g.in_neighbors(v))
        mat = g.matrix
        for u, v in g.edges():
            assert mat[u, v]
        assert mat.sum() == g.m


class TestVerifyCycle:
    def test_valid_with_constraints(self):
        assert verify_cycle(triangle(), [0, 1, 2], 3, 1)

    def test_missing_edge(self):
        rep = verify_cycle(triangle(), [0, 2, 1])
        assert not rep
        assert "0->2" in rep.reason

    def test_length_mismatch(self):
        assert not verify_cycle(triangle(), [0, 1, 2], 2)

    def test_through_missing(self):
        g = complete_digraph(5)
        assert not verify_cycle(g, [0, 1, 2], through=4)

    def test_rotation_invariance(self):
        g = complete_digraph(5)
        cyc = [0, 2, 4, 1, 3]
        for r in range(5):
            rotated = cyc[r:] + cyc[:r]
            assert verify_cycle(g, rotated, 5)
        # reversal is not a directed rotation: only valid if edges exist
        assert verify_hamilton(g, cyc)

    def test_digon_is_a_cycle(self):
        g = Digraph.from_edges(2, [(0, 1), (1, 0)])
        assert verify_cycle(g, [0, 1], 2)

    def test_too_short(self):
        assert not verify_cycle(triangle(), [0])


class TestVerifyPath:
    def test_single_vertex(self):
        assert verify_path(triangle(), [1])

    def test_edge_missing(self):
        assert not verify_path(triangle(), [1, 0])

    def test_repeat(self):
        assert not verify_path(complete_digraph(4), [0, 1, 0])


def test_canonical_cycle():
    assert canonical_cycle([3, 1, 2]) == [1, 2, 3]
    assert canonical_cycle([1, 2, 3]) == [1, 2, 3]


class TestEdgeList:
    def test_round_trip(self):
        g = random_digraph(12, 0.4, 5)
        text = format_edge_list(g)
        g2 = parse_edge_list(text)
        assert g2 == g
        head = text.splitlines()[0].split()
        assert int(head[0]) == g.n and int(head[1]) == g.m

    def test_duplicates_collapse(self):
        g = parse_edge_list("2 2\n0 1\n0 1\n")
        assert g.m == 1

    def test_loop_line_rejected(self):
        with pytest.raises(ParseError):
            parse_edge_list("2 1\n1 1\n")

    @pytest.mark.parametrize(
        "text",
        ["", "2\n", "2 1\n0 1 2\n", "2 2\n0 1\n", "2 1\nx y\n", "1 1\n0 5\n"],
    )
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_edge_list(text)
