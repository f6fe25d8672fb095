"""Shared helpers: independent oracles and graph strategies."""
from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from robham.digraph import Digraph
from robham.generate import complete_digraph, random_digraph


def brute_robust_out(g: Digraph, S, nu: float) -> set[int]:
    """Definition-level oracle for the robust out-neighbourhood: count
    in-neighbours inside S one vertex at a time (no matrix path)."""
    import math

    S = set(S)
    thresh = max(1, math.ceil(nu * g.n - 1e-9))
    out = set()
    for v in range(g.n):
        cnt = sum(1 for u in g.in_neighbors(v) if u in S)
        if cnt >= thresh:
            out.add(v)
    return out


def brute_robust_in(g: Digraph, S, nu: float) -> set[int]:
    import math

    S = set(S)
    thresh = max(1, math.ceil(nu * g.n - 1e-9))
    out = set()
    for v in range(g.n):
        cnt = sum(1 for u in g.out_neighbors(v) if u in S)
        if cnt >= thresh:
            out.add(v)
    return out


def triangle() -> Digraph:
    return Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def k4():
    return complete_digraph(4)


@st.composite
def small_digraphs(draw, max_n: int = 10, min_n: int = 2):
    """Random digraph from a drawn seed and edge probability."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 10**6))
    p = draw(st.sampled_from([0.2, 0.4, 0.6, 0.8]))
    return random_digraph(n, p, seed)


def seeded_digraph(n: int, p: float, seed: int) -> Digraph:
    return random_digraph(n, p, seed)


def random_permutation_factor_graph(n: int, extra_p: float, seed: int) -> Digraph:
    """Graph guaranteed to contain a 1-factor (a planted permutation with
    no fixed points) plus random extra edges."""
    rng = random.Random(f"planted:{seed}")
    while True:
        perm = list(range(n))
        rng.shuffle(perm)
        if all(perm[i] != i for i in range(n)):
            break
    g = Digraph(n)
    for i in range(n):
        g.add_edge(i, perm[i])
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < extra_p:
                g.add_edge(u, v)
    return g
