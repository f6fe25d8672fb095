"""1-factors via bipartite matching, prefactor extensions, and cycle merging.

A 1-factor is a spanning set of vertex-disjoint cycles (every vertex
with in- and outdegree exactly 1); deleting one edge of one cycle gives
a prefactor: cycles plus a path with an origin and a terminus.  Rotation
moves ("extensions") follow an out-edge of the terminus, either closing
a cycle off the path or splicing a cycle into it; a breadth-first search
over reachable termini then merges short cycles into long ones.

A prefactor is stored as a successor map missing exactly one edge;
every extension changes the in-neighbour map F^- at exactly one vertex,
which the tests assert directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .digraph import Digraph, canonical_cycle, verify_cycle
from .errors import (
    EdgeNotOnCycle,
    InputError,
    IsOrigin,
    GoalUnreachable,
    NoFactor,
    NotOutNeighbour,
)
from .expansion import ExpansionParams, ceil_count

CYCLE_CREATING = "cycle_creating"
CYCLE_DESTROYING = "cycle_destroying"


# -- maximum bipartite matching ---------------------------------------------

def max_bipartite_matching(
    adj: Sequence[Sequence[int]], n_left: int, n_right: int
) -> list[int]:
    """Augmenting-path maximum matching; returns match_right (or -1).

    Greedy seeding first, then one iterative alternating DFS per
    unmatched left vertex.  Deterministic: vertices and neighbours are
    scanned in ascending order.
    """
    match_left = [-1] * n_left
    match_right = [-1] * n_right
    for u in range(n_left):
        for v in adj[u]:
            if match_right[v] == -1:
                match_right[v] = u
                match_left[u] = v
                break
    for u0 in range(n_left):
        if match_left[u0] != -1:
            continue
        # iterative DFS over alternating paths from u0
        seen = [False] * n_right
        stack = [(u0, iter(adj[u0]))]
        parent: dict[int, tuple[int, int]] = {}  # right v -> (left u, prev right)
        found = -1
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if seen[v]:
                    continue
                seen[v] = True
                parent[v] = (u, -1)
                w = match_right[v]
                if w == -1:
                    found = v
                    break
                stack.append((w, iter(adj[w])))
                advanced = True
                break
            else:
                stack.pop()
                continue
            if found != -1:
                break
            if advanced:
                continue
        if found != -1:
            # walk back flipping matched edges
            v = found
            while True:
                u, _ = parent[v]
                pv = match_left[u]
                match_right[v] = u
                match_left[u] = v
                if pv == -1 and u == u0:
                    break
                v = pv
    return match_right


# -- factors ------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    """Vertex-disjoint cycles covering all of V; canonical rotation order."""

    cycles: tuple[tuple[int, ...], ...]

    def validate(self, g: Digraph) -> bool:
        seen: set[int] = set()
        for c in self.cycles:
            if not verify_cycle(g, c):
                return False
            if seen & set(c):
                return False
            seen.update(c)
        return seen == set(range(g.n))

    def cycle_lengths(self) -> list[int]:
        return sorted(len(c) for c in self.cycles)


def _cycles_from_successor(succ: Sequence[int]) -> list[list[int]]:
    n = len(succ)
    seen = [False] * n
    cycles = []
    for s in range(n):
        if seen[s] or succ[s] < 0:
            continue
        cyc = []
        v = s
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = succ[v]
        cycles.append(canonical_cycle(cyc))
    cycles.sort(key=lambda c: c[0])
    return cycles


def find_factor(g: Digraph) -> Factor:
    """1-factor via the bipartite reduction (left copies -> right copies,
    edge iff u->v); a perfect matching is exactly a factor.

    Raises NoFactor with a Hall-violator set when the matching is not
    perfect.
    """
    if g.n < 1:
        raise InputError("graph must have at least one vertex")
    adj = [g.out_neighbors(u) for u in range(g.n)]
    match_right = max_bipartite_matching(adj, g.n, g.n)
    succ = [-1] * g.n
    matched = 0
    match_left = [-1] * g.n
    for v, u in enumerate(match_right):
        if u != -1:
            succ[u] = v
            match_left[u] = v
            matched += 1
    if matched == g.n:
        return Factor(tuple(tuple(c) for c in _cycles_from_successor(succ)))
    # Hall violator: alternating closure from any unmatched left vertex.
    u0 = match_left.index(-1)
    S = {u0}
    T: set[int] = set()
    frontier = [u0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in T:
                    T.add(v)
                    w = match_right[v]
                    if w != -1 and w not in S:
                        S.add(w)
                        nxt.append(w)
        frontier = nxt
    assert len(T) < len(S)
    raise NoFactor(tuple(sorted(S)))


# -- prefactors and extensions -------------------------------------------------

@dataclass
class Prefactor:
    """A factor minus one edge: cycles plus one path (origin -> terminus).

    ``succ[v]`` is the unique out-neighbour of v inside the structure
    (-1 for the terminus); ``pred`` is its inverse, the map F^- (-1 for
    the origin); ``on_path[v]`` flags the path's vertices.
    """

    succ: list[int]
    pred: list[int]
    origin: int
    terminus: int
    on_path: list[bool]

    @property
    def n(self) -> int:
        return len(self.succ)

    def path_vertices(self) -> list[int]:
        out = [self.origin]
        v = self.origin
        while v != self.terminus:
            v = self.succ[v]
            out.append(v)
        return out

    def cycles(self) -> list[list[int]]:
        skip = set(self.path_vertices())
        succ = [(-1 if v in skip else s) for v, s in enumerate(self.succ)]
        return _cycles_from_successor(succ)

    def clone(self) -> "Prefactor":
        return Prefactor(
            list(self.succ), list(self.pred), self.origin, self.terminus,
            list(self.on_path),
        )

    def validate(self, g: Digraph) -> bool:
        path = self.path_vertices()
        if set(path) != {v for v in range(self.n) if self.on_path[v]}:
            return False
        covered = set(path)
        for c in self.cycles():
            if not verify_cycle(g, c):
                return False
            covered.update(c)
        if covered != set(range(self.n)):
            return False
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                return False
        for v in range(self.n):
            if v != self.origin and self.succ[self.pred[v]] != v:
                return False
        return self.pred[self.origin] == -1 and self.succ[self.terminus] == -1


def prefactor_from_factor(factor: Factor) -> "Prefactor":
    """Internal: factor as a successor structure with no edge removed yet."""
    n = sum(len(c) for c in factor.cycles)
    succ = [-1] * n
    for c in factor.cycles:
        for i, v in enumerate(c):
            succ[v] = c[(i + 1) % len(c)]
    pred = [-1] * n
    for v, s in enumerate(succ):
        pred[s] = v
    return Prefactor(succ, pred, -1, -1, [False] * n)


def open_cycle(factor: Factor, cycle: Sequence[int], edge: tuple[int, int]) -> Prefactor:
    """Delete one edge (a, b) of a cycle of the factor: path runs b .. a."""
    a, b = edge
    target = canonical_cycle(cycle)
    if tuple(target) not in {tuple(canonical_cycle(c)) for c in factor.cycles}:
        raise EdgeNotOnCycle(f"cycle {cycle} is not part of the factor")
    k = len(target)
    on_it = False
    for i in range(k):
        if target[i] == a and target[(i + 1) % k] == b:
            on_it = True
            break
    if not on_it:
        raise EdgeNotOnCycle(f"edge {a}->{b} not on cycle {cycle}")
    pf = prefactor_from_factor(factor)
    pf.succ[a] = -1
    pf.pred[b] = -1
    pf.origin = b
    pf.terminus = a
    v = b
    while True:
        pf.on_path[v] = True
        if v == a:
            break
        v = pf.succ[v]
    return pf


@dataclass(frozen=True)
class ExtensionStep:
    """One rotation move: follow terminus -> z, new terminus is F^-(z)."""

    from_terminus: int
    along: int
    kind: str
    new_terminus: int


def extend(g: Digraph, pf: Prefactor, z: int) -> Prefactor:
    """Extension along the edge ter(F) -> z.

    Cycle-creating when z lies on the path (the segment z..ter closes
    into a cycle); cycle-destroying when z lies on a cycle (that cycle
    splices into the path).  Origin never changes; the new terminus is
    F^-(z).
    """
    y = pf.terminus
    if not g.has_edge(y, z):
        raise NotOutNeighbour(f"{z} is not an out-neighbour of terminus {y}")
    if z == pf.origin:
        raise IsOrigin("extension vertex must differ from the origin")
    creating = pf.on_path[z]
    new = pf.clone()
    zp = pf.pred[z]
    new.succ[y] = z
    new.pred[z] = y
    new.succ[zp] = -1
    new.terminus = zp
    if creating:
        # path segment z..y became a cycle (closed by the new edge y->z)
        v = z
        while True:
            new.on_path[v] = False
            if v == y:
                break
            v = new.succ[v]
    else:
        # old cycle z..zp joined the path
        v = z
        while v != -1:
            new.on_path[v] = True
            if v == zp:
                break
            v = new.succ[v]
    return new


def extension_kind(pf: Prefactor, z: int) -> str:
    return CYCLE_CREATING if pf.on_path[z] else CYCLE_DESTROYING


def reach_terminus(
    g: Digraph,
    start: Prefactor,
    forbidden: Callable[[Prefactor], set[int]],
    goal: Callable[[int], bool],
    depth_cap: int,
) -> tuple[Prefactor, tuple[ExtensionStep, ...]]:
    """BFS over termini reachable by extensions avoiding forbidden sets.

    Keeps one representative prefactor per reached terminus (first
    discovered in scan order); stops at the first terminus satisfying
    ``goal``.  A zero-extension hit on the start terminus is allowed.
    """
    if start.origin not in forbidden(start):
        raise InputError("policy must mark the origin forbidden")
    if goal(start.terminus):
        return start, ()
    reached: dict[int, tuple[Prefactor, tuple[ExtensionStep, ...]]] = {
        start.terminus: (start, ())
    }
    frontier = [start.terminus]
    for _depth in range(depth_cap):
        if not frontier:
            break
        next_frontier: list[int] = []
        for y in sorted(frontier):
            pf, trace = reached[y]
            banned = forbidden(pf)
            for z in g.out_neighbors(y):
                if z == pf.origin:
                    continue
                w = pf.pred[z]
                if w in reached or w in banned or w == -1:
                    continue
                step = ExtensionStep(y, z, extension_kind(pf, z), w)
                nxt = extend(g, pf, z)
                reached[w] = (nxt, trace + (step,))
                if goal(w):
                    return nxt, trace + (step,)
                next_frontier.append(w)
        frontier = next_frontier
    raise GoalUnreachable(depth_cap, len(reached))


def replay_extensions(
    g: Digraph, start: Prefactor, steps: Iterable[ExtensionStep]
) -> Prefactor:
    """Re-apply a recorded extension trace; oracle for search results."""
    pf = start
    for step in steps:
        assert pf.terminus == step.from_terminus
        pf = extend(g, pf, step.along)
        assert pf.terminus == step.new_terminus
    return pf


# -- cycle-count reduction ------------------------------------------------------

@dataclass(frozen=True)
class ReduceRound:
    opened_length: int
    min_length_before: int
    count_at_min_before: int
    min_length_after: int
    count_at_min_after: int
    extensions: int


@dataclass
class ReduceResult:
    factor: Factor
    rounds: list[ReduceRound] = field(default_factory=list)
    failure: str | None = None

    @property
    def cycle_count(self) -> int:
        return len(self.factor.cycles)


def _lex_smallest_edge(cycle: Sequence[int]) -> tuple[int, int]:
    k = len(cycle)
    return min((cycle[i], cycle[(i + 1) % k]) for i in range(k))


def reduce_cycles(
    g: Digraph,
    factor: Factor,
    xi: float,
    round_cap: int | None = None,
    params: ExpansionParams | None = None,
    target_count: int | None = None,
) -> ReduceResult:
    """Merge short cycles until every cycle has length >= xi*n/2.

    Each round opens a shortest cycle (lexicographically smallest edge),
    forbids the first and last ceil(xi*n/2) path vertices, walks
    extensions to a terminus that closes back into the origin, and
    closes.  The multiset of cycle lengths improves monotonically: the
    minimum never drops and the count at the minimum strictly falls.

    ``target_count`` keeps the merge loop running past the length
    threshold until at most that many cycles remain (the pipeline needs
    this when its absorber only takes one or two paths).

    On a failed round the best factor so far is returned with the
    failure recorded, not raised.
    """
    if not (0 < xi < 1):
        raise InputError(f"xi must be in (0,1), got {xi}")
    n = g.n
    half = xi * n / 2
    k_band = max(1, ceil_count(xi / 2, n))
    if round_cap is None:
        round_cap = n + 16
    if params is not None:
        depth_cap = math.ceil(2 / params.mu) + 2
    else:
        depth_cap = 4 * n

    current = factor
    result = ReduceResult(factor=current)
    for _ in range(round_cap):
        lengths = current.cycle_lengths()
        shortest = lengths[0]
        if len(current.cycles) <= 1:
            break
        if shortest >= half - 1e-9 and (
            target_count is None or len(current.cycles) <= target_count
        ):
            break
        candidates = [c for c in current.cycles if len(c) == shortest]
        target = min(candidates, key=lambda c: min(c))
        edge = _lex_smallest_edge(target)
        pf0 = open_cycle(current, target, edge)
        p0 = set(pf0.path_vertices())

        def policy(pf: Prefactor) -> set[int]:
            path = pf.path_vertices()
            if len(path) <= 2 * k_band:
                return set(path)
            return set(path[:k_band]) | set(path[-k_band:])

        origin = pf0.origin

        def goal(y: int) -> bool:
            return g.has_edge(y, origin) and y not in p0

        try:
            pf_t, trace = reach_terminus(g, pf0, policy, goal, depth_cap)
        except GoalUnreachable as exc:
            result.failure = f"round at length {shortest}: {exc}"
            break
        closed = pf_t.path_vertices()
        assert len(closed) > shortest
        new_cycles = [tuple(canonical_cycle(closed))]
        new_cycles.extend(tuple(c) for c in pf_t.cycles())
        new_factor = Factor(tuple(sorted(new_cycles, key=lambda c: c[0])))
        new_lengths = new_factor.cycle_lengths()
        result.rounds.append(
            ReduceRound(
                opened_length=shortest,
                min_length_before=shortest,
                count_at_min_before=lengths.count(shortest),
                min_length_after=new_lengths[0],
                count_at_min_after=new_lengths.count(shortest),
                extensions=len(trace),
            )
        )
        current = new_factor
        result.factor = current
    return result
