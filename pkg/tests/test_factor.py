import random

import pytest
from hypothesis import given, settings, strategies as st

from robham.digraph import Digraph, verify_cycle
from robham.errors import (
    EdgeNotOnCycle,
    GoalUnreachable,
    InputError,
    IsOrigin,
    NoFactor,
    NotOutNeighbour,
)
from robham.expansion import ExpansionParams
from robham.factor import (
    CYCLE_CREATING,
    CYCLE_DESTROYING,
    Factor,
    extend,
    extension_kind,
    find_factor,
    max_bipartite_matching,
    open_cycle,
    reach_terminus,
    reduce_cycles,
    replay_extensions,
)
from robham.generate import complete_digraph, random_digraph

from conftest import random_permutation_factor_graph, triangle


class TestMatching:
    def test_small(self):
        adj = [[0, 1], [0], [1, 2]]
        match_right = max_bipartite_matching(adj, 3, 3)
        matched = [(u, v) for v, u in enumerate(match_right) if u != -1]
        assert len(matched) == 3

    def test_imperfect(self):
        adj = [[0], [0], [1]]
        match_right = max_bipartite_matching(adj, 3, 2)
        assert sum(1 for u in match_right if u != -1) == 2

    @given(st.integers(0, 10**6))
    @settings(max_examples=50)
    def test_valid_matching(self, seed):
        rng = random.Random(seed)
        nl, nr = rng.randint(1, 8), rng.randint(1, 8)
        adj = [
            sorted(rng.sample(range(nr), rng.randint(0, nr))) for _ in range(nl)
        ]
        match_right = max_bipartite_matching(adj, nl, nr)
        lefts = [u for u in match_right if u != -1]
        assert len(lefts) == len(set(lefts))
        for v, u in enumerate(match_right):
            if u != -1:
                assert v in adj[u]


class TestFindFactor:
    def test_triangle(self):
        f = find_factor(triangle())
        assert f.cycles == ((0, 1, 2),)

    def test_complete_valid(self, k4):
        f = find_factor(k4)
        assert f.validate(k4)

    def test_outdegree_zero(self):
        g = Digraph.from_edges(3, [(0, 1), (1, 0), (1, 2), (0, 2)])
        with pytest.raises(NoFactor) as exc_info:
            find_factor(g)
        # certificate genuinely violates Hall: |N(S)| < |S|, re-checked directly
        S = exc_info.value.violator
        nbrs = set()
        for u in S:
            nbrs.update(g.out_neighbors(u))
        assert len(nbrs) < len(S)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_planted_factor_found(self, seed):
        g = random_permutation_factor_graph(12, 0.3, seed)
        f = find_factor(g)
        assert f.validate(g)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_nofactor_certificates(self, seed):
        g = random_digraph(8, 0.25, seed)
        try:
            f = find_factor(g)
            assert f.validate(g)
        except NoFactor as exc:
            nbrs = set()
            for u in exc.violator:
                nbrs.update(g.out_neighbors(u))
            assert len(nbrs) < len(exc.violator)


def two_cycle_factor_graph():
    """Cycle (3,4,5), path 0->1->2 closable later; edges for both cases."""
    edges = [(0, 1), (1, 2), (3, 4), (4, 5), (5, 3), (2, 4), (2, 1), (2, 0)]
    return Digraph.from_edges(6, edges)


def open_path_prefactor():
    g = two_cycle_factor_graph()
    factor = Factor(cycles=((0, 1, 2), (3, 4, 5)))
    # factor needs 2->0 to close the first cycle; present in the edge list
    pf = open_cycle(factor, (0, 1, 2), (2, 0))
    return g, pf


class TestOpenCycle:
    def test_basic(self):
        factor = Factor(cycles=((0, 1, 2),))
        pf = open_cycle(factor, (0, 1, 2), (2, 0))
        assert pf.origin == 0 and pf.terminus == 2
        assert pf.path_vertices() == [0, 1, 2]
        assert pf.cycles() == []

    def test_two_cycles(self):
        g, pf = open_path_prefactor()
        assert pf.path_vertices() == [0, 1, 2]
        assert pf.cycles() == [[3, 4, 5]]
        assert pf.validate(g)

    def test_edge_not_on_cycle(self):
        factor = Factor(cycles=((0, 1, 2),))
        with pytest.raises(EdgeNotOnCycle):
            open_cycle(factor, (0, 1, 2), (0, 2))


class TestExtend:
    def test_cycle_destroying(self):
        # derived by hand from the case-(ii) rule: path absorbs the cycle
        g, pf = open_path_prefactor()
        assert extension_kind(pf, 4) == CYCLE_DESTROYING
        nxt = extend(g, pf, 4)
        assert nxt.path_vertices() == [0, 1, 2, 4, 5, 3]
        assert nxt.cycles() == []
        assert nxt.terminus == 3
        assert nxt.origin == 0
        assert nxt.validate(g)

    def test_cycle_creating(self):
        # derived by hand from the case-(i) rule: z = 1 on the path
        g, pf = open_path_prefactor()
        assert extension_kind(pf, 1) == CYCLE_CREATING
        nxt = extend(g, pf, 1)
        assert nxt.path_vertices() == [0]
        assert sorted(map(tuple, nxt.cycles())) == [(1, 2), (3, 4, 5)]
        assert nxt.terminus == 0
        assert nxt.validate(g)

    def test_is_origin(self):
        g, pf = open_path_prefactor()
        with pytest.raises(IsOrigin):
            extend(g, pf, 0)

    def test_not_out_neighbour(self):
        g, pf = open_path_prefactor()
        with pytest.raises(NotOutNeighbour):
            extend(g, pf, 5)

    @given(st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_exactly_one_pred_changes(self, seed):
        g = random_permutation_factor_graph(10, 0.4, seed)
        factor = find_factor(g)
        rng = random.Random(seed)
        cyc = factor.cycles[rng.randrange(len(factor.cycles))]
        i = rng.randrange(len(cyc))
        pf = open_cycle(factor, cyc, (cyc[i], cyc[(i + 1) % len(cyc)]))
        for _ in range(4):
            opts = [z for z in g.out_neighbors(pf.terminus) if z != pf.origin]
            if not opts:
                break
            z = rng.choice(opts)
            nxt = extend(g, pf, z)
            diffs = [v for v in range(10) if nxt.pred[v] != pf.pred[v]]
            assert diffs == [z]
            assert nxt.origin == pf.origin
            assert nxt.validate(g)
            pf = nxt


class TestReachTerminus:
    def test_zero_step(self):
        g, pf = open_path_prefactor()
        result, trace = reach_terminus(
            g, pf, lambda f: {f.origin}, lambda y: y == pf.terminus, 5
        )
        assert trace == ()
        assert result is pf

    def test_trace_replays(self):
        g = random_permutation_factor_graph(30, 0.5, 17)
        factor = find_factor(g)
        cyc = min(factor.cycles, key=len)
        pf = open_cycle(factor, cyc, (cyc[-1], cyc[0]))
        origin = pf.origin
        p0 = set(pf.path_vertices())

        def goal(y):
            return g.has_edge(y, origin) and y not in p0

        result, trace = reach_terminus(g, pf, lambda f: {f.origin}, goal, 40)
        replayed = replay_extensions(g, pf, trace)
        assert replayed.succ == result.succ
        assert replayed.terminus == result.terminus

    def test_goal_unreachable(self):
        g, pf = open_path_prefactor()
        with pytest.raises(GoalUnreachable):
            reach_terminus(g, pf, lambda f: {f.origin}, lambda y: False, 8)

    def test_policy_must_forbid_origin(self):
        g, pf = open_path_prefactor()
        with pytest.raises(InputError):
            reach_terminus(g, pf, lambda f: set(), lambda y: True, 3)


class TestReduceCycles:
    def test_already_long_unchanged(self):
        g = complete_digraph(10)
        factor = Factor(cycles=(tuple(range(10)),))
        result = reduce_cycles(g, factor, 0.2)
        assert result.factor.cycles == factor.cycles
        assert result.rounds == []

    def test_single_hamilton_unchanged(self):
        g = triangle()
        factor = find_factor(g)
        result = reduce_cycles(g, factor, 0.5)
        assert result.factor.cycles == factor.cycles

    def test_merges_down(self):
        g = random_digraph(100, 0.5, 4)
        factor = find_factor(g)
        result = reduce_cycles(g, factor, 0.2)
        assert result.failure is None
        assert result.cycle_count <= 10
        assert result.factor.validate(g)

    def test_round_monotonicity(self):
        g = random_digraph(120, 0.5, 9)
        factor = find_factor(g)
        result = reduce_cycles(g, factor, 0.2)
        prev_min = 0
        for rnd in result.rounds:
            assert rnd.min_length_before >= prev_min
            assert rnd.min_length_after >= rnd.min_length_before
            if rnd.min_length_after == rnd.min_length_before:
                assert rnd.count_at_min_after < rnd.count_at_min_before
            prev_min = rnd.min_length_before

    def test_target_count_merges_further(self):
        g = complete_digraph(12)
        factor = find_factor(g)
        result = reduce_cycles(g, factor, 0.5, target_count=1)
        assert result.cycle_count == 1
        assert result.factor.validate(g)

    def test_xi_validation(self):
        with pytest.raises(InputError):
            reduce_cycles(complete_digraph(4), Factor(((0, 1, 2, 3),)), 1.5)
