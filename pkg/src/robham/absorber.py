"""Ladders, rung-swap absorption, randomized covers, and full absorbers.

A ladder from u to v is an alternating path Q = [x_0 .. x_t x_t* .. x_0*]
(t even, x_0 = u, x_0* = v) together with vertex-disjoint connector
paths Q_1, Q_3, ..., Q_{t-1} from x_i to x_i*, each internally disjoint
from Q.  Its rung paths are

    R_i = x_i x_{i+1} Q_{i+1} x_{i+1}* x_i*   (even i < t),   R_t = x_t x_t*

and the alternative rungs R'_i = x_i x_{i-1} Q_{i-1} x_{i-1}* x_i* for
even i >= 2.  The rungs and the alternative rungs (plus u, v) tile the
same vertex set, which is exactly what makes the swap argument work: a
ladder embedded in a cycle (every rung a contiguous arc) can trade its
rungs for the alternative ones, freeing room to splice in an external
u -> v path without losing a vertex.

A d-absorber bundles a vertex-disjoint set of cover pairs, one ladder
per pair, and one cycle all the ladders are embedded in; it can then
swallow up to d vertex-disjoint external paths.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .digraph import Digraph, canonical_cycle, verify_cycle
from .errors import (
    AssignmentFailed,
    CoverNotFound,
    EndpointClash,
    InputError,
    NotDistinct,
    NotEmbedded,
    PathCollision,
    SizeExceeded,
    TooManyPaths,
)
from .expansion import ExpansionParams, degraded_after_deletion
from .factor import max_bipartite_matching
from .pathfind import (
    AlternatingPath,
    build_alternating_path,
    build_disjoint_paths,
)


# -- ladders -------------------------------------------------------------------

@dataclass(frozen=True)
class Ladder:
    """Alternating path plus connectors; see the module docstring."""

    q: AlternatingPath
    connectors: tuple[tuple[int, ...], ...]  # ordered by odd index 1, 3, ..., t-1

    @property
    def t(self) -> int:
        return len(self.q.vertices) // 2 - 1

    @property
    def source(self) -> int:
        return self.q.vertices[0]

    @property
    def sink(self) -> int:
        return self.q.vertices[-1]

    def x(self, i: int) -> int:
        return self.q.vertices[i]

    def x_star(self, i: int) -> int:
        return self.q.vertices[len(self.q.vertices) - 1 - i]

    def connector(self, i: int) -> tuple[int, ...]:
        """Connector path from x_i to x_i* for odd i."""
        return self.connectors[(i - 1) // 2]

    def vertices(self) -> set[int]:
        out = set(self.q.vertices)
        for c in self.connectors:
            out.update(c)
        return out

    def rung(self, i: int) -> list[int]:
        """Rung path R_i (even i): contiguous arcs of the host cycle."""
        if i % 2 != 0 or not (0 <= i <= self.t):
            raise InputError(f"rung index must be even in [0, t], got {i}")
        if i == self.t:
            return [self.x(self.t), self.x_star(self.t)]
        return [self.x(i), *self.connector(i + 1), self.x_star(i)]

    def alt_rung(self, i: int) -> list[int]:
        """Alternative rung R'_i (even i >= 2)."""
        if i % 2 != 0 or not (2 <= i <= self.t):
            raise InputError(f"alt rung index must be even in [2, t], got {i}")
        return [self.x(i), *self.connector(i - 1), self.x_star(i)]

    def rungs(self) -> list[list[int]]:
        return [self.rung(i) for i in range(0, self.t + 1, 2)]

    def validate(self, g: Digraph) -> bool:
        """Full structural check against the reference graph."""
        t = self.t
        if t % 2 != 0 or t < 0:
            return False
        if not self.q.validate(g):
            return False
        if len(self.connectors) != t // 2:
            return False
        q_set = set(self.q.vertices)
        seen_inner: set[int] = set()
        for k, conn in enumerate(self.connectors):
            i = 2 * k + 1
            if conn[0] != self.x(i) or conn[-1] != self.x_star(i):
                return False
            if len(set(conn)) != len(conn):
                return False
            if any(not g.has_edge(a, b) for a, b in zip(conn, conn[1:])):
                return False
            inner = set(conn[1:-1])
            if inner & q_set or inner & seen_inner:
                return False
            seen_inner.update(inner)
        # rung tiles: union of rungs is V(L); alternative rungs miss only u, v
        rung_union: set[int] = set()
        for i in range(0, t + 1, 2):
            rung_union.update(self.rung(i))
        if rung_union != self.vertices():
            return False
        alt_union: set[int] = {self.source, self.sink}
        for i in range(2, t + 1, 2):
            alt_union.update(self.alt_rung(i))
        return alt_union == self.vertices()


def build_ladder(
    g: Digraph,
    u: int,
    v: int,
    params: ExpansionParams,
    size_cap: int | None = None,
    rng: random.Random | None = None,
) -> Ladder:
    """Ladder from u to v: alternating path first, then connectors built
    disjointly on the graph minus the even-indexed rung endpoints."""
    if size_cap is None:
        size_cap = math.ceil(3 / (params.mu * params.mu))
    q = build_alternating_path(g, u, v, params, rng=rng)
    verts = q.vertices
    t = len(verts) // 2 - 1
    even_ends = set()
    for i in range(0, t + 1, 2):
        even_ends.add(verts[i])
        even_ends.add(verts[len(verts) - 1 - i])
    sub, vmap = g.delete_vertices(even_ends)
    sub_params = degraded_after_deletion(params, len(even_ends), g.n)
    pairs = [
        (vmap.old_to_new[verts[i]], vmap.old_to_new[verts[len(verts) - 1 - i]])
        for i in range(1, t, 2)
    ]
    sub_conns = build_disjoint_paths(sub, pairs, sub_params, rng=rng)
    connectors = tuple(tuple(vmap.to_old(p)) for p in sub_conns)
    ladder = Ladder(q=q, connectors=connectors)
    size = len(ladder.vertices())
    if size > size_cap:
        raise SizeExceeded(size, size_cap)
    assert ladder.validate(g), "constructed ladder failed structural check"
    return ladder


def build_ladders(
    g: Digraph,
    pairs: Sequence[tuple[int, int]],
    params: ExpansionParams,
    per_ladder_cap: int | None = None,
    rng: random.Random | None = None,
) -> list[Ladder]:
    """Vertex-disjoint ladders L_i from u_i to v_i, built iteratively on
    graphs with earlier ladders and later endpoints deleted."""
    endpoints: list[int] = []
    for a, b in pairs:
        endpoints.extend((a, b))
    if len(set(endpoints)) != len(endpoints):
        raise EndpointClash("ladder endpoints must all be distinct")
    ladders: list[Ladder] = []
    used: set[int] = set()
    for idx, (a, b) in enumerate(pairs):
        later: set[int] = set()
        for a2, b2 in pairs[idx + 1:]:
            later.update((a2, b2))
        drop = used | later
        sub, vmap = g.delete_vertices(drop)
        sub_params = degraded_after_deletion(params, len(drop), g.n)
        try:
            sub_ladder = build_ladder(
                sub, vmap.old_to_new[a], vmap.old_to_new[b], sub_params,
                size_cap=per_ladder_cap, rng=rng,
            )
        except Exception as exc:
            exc.ladder_index = idx
            raise
        q = AlternatingPath(tuple(vmap.to_old(sub_ladder.q.vertices)))
        conns = tuple(tuple(vmap.to_old(c)) for c in sub_ladder.connectors)
        ladder = Ladder(q=q, connectors=conns)
        ladders.append(ladder)
        used.update(ladder.vertices())
    return ladders


# -- absorption by rung swaps ---------------------------------------------------

def _cycle_successors(cycle: Sequence[int]) -> dict[int, int]:
    return {cycle[i]: cycle[(i + 1) % len(cycle)] for i in range(len(cycle))}


def _swap_segment(succ: dict[int, int], old: Sequence[int], new: Sequence[int]) -> None:
    """Replace the contiguous arc ``old`` with ``new`` (same endpoints)."""
    for a, b in zip(old, old[1:]):
        if succ.get(a) != b:
            raise NotEmbedded(f"arc {a}->{b} not contiguous in the current cycle")
    for w in old[1:-1]:
        del succ[w]
    for a, b in zip(new, new[1:]):
        succ[a] = b


def absorb_path(
    g: Digraph, cycle: Sequence[int], ladder: Ladder, path: Sequence[int]
) -> list[int]:
    """Splice ``path`` (from the ladder's source to its sink, internally
    disjoint from the cycle) into a cycle the ladder is embedded in.

    Swaps rungs for alternative rungs in the order i = 0, 2, ..., t with
    R'_0 := path; each swap frees exactly the connector the next one
    needs.  The result covers V(cycle) union V(path).
    """
    if path[0] != ladder.source or path[-1] != ladder.sink:
        raise PathCollision(
            f"path must run {ladder.source}->{ladder.sink}, got "
            f"{path[0]}->{path[-1]}"
        )
    if len(set(path)) != len(path):
        raise PathCollision("path vertices must be distinct")
    if any(not g.has_edge(a, b) for a, b in zip(path, path[1:])):
        raise PathCollision("path is not a path of the graph")
    cyc_set = set(cycle)
    interior = set(path[1:-1])
    if interior & cyc_set:
        raise PathCollision("path interior touches the cycle")

    succ = _cycle_successors(cycle)
    for rung in ladder.rungs():
        for a, b in zip(rung, rung[1:]):
            if succ.get(a) != b:
                raise NotEmbedded(f"rung arc {a}->{b} not on the cycle")

    for i in range(0, ladder.t + 1, 2):
        new_rung = list(path) if i == 0 else ladder.alt_rung(i)
        _swap_segment(succ, ladder.rung(i), new_rung)

    out = [ladder.source]
    w = succ[ladder.source]
    while w != ladder.source:
        out.append(w)
        w = succ[w]
    assert len(out) == len(succ), "rung swaps disconnected the cycle"
    return canonical_cycle(out)


# -- covers ------------------------------------------------------------------

@dataclass(frozen=True)
class Cover:
    """Vertex-disjoint ordered pairs, d-covering the recorded target set.

    ``targets`` may be empty: the cover is then only a pool of disjoint
    pairs and the d-cover condition is vacuous.
    """

    pairs: tuple[tuple[int, int], ...]
    targets: tuple[int, ...]
    d: int

    def vertices(self) -> set[int]:
        out = set()
        for a, b in self.pairs:
            out.add(a)
            out.add(b)
        return out


def covers(g: Digraph, pair: tuple[int, int], target: tuple[int, int]) -> bool:
    """(u, v) covers (x, y) iff u->x and y->v are edges.

    The pair must be disjoint from the target and u != v; the target may
    be diagonal (x == y), which single-vertex paths need.
    """
    u, v = pair
    x, y = target
    if u == v:
        raise NotDistinct("cover pair must have distinct vertices")
    if u in (x, y) or v in (x, y):
        raise NotDistinct("cover pair must be disjoint from the target")
    return g.has_edge(u, x) and g.has_edge(y, v)


def covering_pairs(
    g: Digraph, pairs: Sequence[tuple[int, int]], target: tuple[int, int]
) -> list[int]:
    """Indices of pairs covering the target (disjointness included)."""
    x, y = target
    out = []
    for k, (u, v) in enumerate(pairs):
        if u in (x, y) or v in (x, y):
            continue
        if g.has_edge(u, x) and g.has_edge(y, v):
            out.append(k)
    return out


def verify_cover(
    g: Digraph, pairs: Sequence[tuple[int, int]], targets: Iterable[int], d: int
) -> tuple[bool, tuple[int, int] | None, int]:
    """Exhaustive d-cover check over targets^2; returns the worst target."""
    tgt = sorted(set(targets))
    if not tgt:
        return True, None, 0
    mat = g.matrix
    idx = np.asarray(tgt)
    counts = np.zeros((len(tgt), len(tgt)), dtype=np.int32)
    for u, v in pairs:
        from_u = mat[u, idx].copy()   # u -> x
        into_v = mat[idx, v].copy()   # y -> v
        for w in (u, v):              # pair must be disjoint from the target
            hit = np.nonzero(idx == w)[0]
            if hit.size:
                from_u[hit[0]] = False
                into_v[hit[0]] = False
        counts += np.outer(from_u, into_v).astype(np.int32)
    worst_flat = int(np.argmin(counts))
    wx, wy = divmod(worst_flat, len(tgt))
    worst_count = int(counts[wx, wy])
    if worst_count >= d:
        return True, None, worst_count
    return False, (tgt[wx], tgt[wy]), worst_count


def cover_size(d: int, gamma: float, n: int) -> int:
    """Cover cardinality that works at full scale:
    ceil(24*d*gamma^-2*log(24*d*gamma^-2) + 48*gamma^-2*log(n))."""
    g2 = gamma ** -2
    return math.ceil(24 * d * g2 * math.log(24 * d * g2) + 48 * g2 * math.log(n))


def desk_cover_size(d: int, gamma: float, n: int) -> int:
    """Desk-scale default, far below the full-scale bound."""
    return max(d + 2, math.ceil(4 * gamma ** -2 * math.log(max(n, 2))))


def build_cover(
    g: Digraph,
    targets: Iterable[int],
    d: int,
    m: int,
    attempts: int = 20,
    seed: int = 0,
) -> Cover:
    """Sample m vertex-disjoint ordered pairs that d-cover the targets.

    Pairs are drawn sequentially without vertex replacement (a colliding
    draw is rejected immediately); only a failed d-cover check triggers
    a full restart.  Raises CoverNotFound with the worst-covered target
    after all attempts.
    """
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    if 2 * m > g.n:
        raise InputError(f"need 2m <= n, got m={m}, n={g.n}")
    tgt = tuple(sorted(set(targets)))
    rng = random.Random(f"cover:{seed}")
    worst_seen: tuple[int, int] | None = None
    worst_count = -1
    for _ in range(attempts):
        used: set[int] = set()
        pairs: list[tuple[int, int]] = []
        stuck = False
        for _k in range(m):
            for _try in range(200 * (g.n + 1)):
                u = rng.randrange(g.n)
                v = rng.randrange(g.n)
                if u != v and u not in used and v not in used:
                    break
            else:
                stuck = True
                break
            used.add(u)
            used.add(v)
            pairs.append((u, v))
        if stuck:
            continue
        ok, worst, cnt = verify_cover(g, pairs, tgt, d)
        if ok:
            return Cover(pairs=tuple(pairs), targets=tgt, d=d)
        if worst_count < 0 or cnt < worst_count:
            worst_seen, worst_count = worst, cnt
    raise CoverNotFound(attempts, worst_seen, max(worst_count, 0))


# -- absorbers ----------------------------------------------------------------

@dataclass(frozen=True)
class Absorber:
    """(cover, ladders, embedding cycle); ladder k belongs to cover pair k."""

    cover: Cover
    ladders: tuple[Ladder, ...]
    cycle: tuple[int, ...]
    d: int

    def vertices(self) -> set[int]:
        return set(self.cycle)

    def validate(self, g: Digraph) -> bool:
        if len(self.ladders) != len(self.cover.pairs):
            return False
        if not verify_cycle(g, self.cycle):
            return False
        seen: set[int] = set()
        succ = _cycle_successors(self.cycle)
        for (u, v), ladder in zip(self.cover.pairs, self.ladders):
            if ladder.source != u or ladder.sink != v:
                return False
            if not ladder.validate(g):
                return False
            lv = ladder.vertices()
            if lv & seen:
                return False
            seen.update(lv)
            for rung in ladder.rungs():
                for a, b in zip(rung, rung[1:]):
                    if succ.get(a) != b:
                        return False
        return True


def build_absorber(
    g: Digraph,
    d: int,
    params: ExpansionParams,
    m: int,
    seed: int = 0,
    cover_targets: Iterable[int] | None = None,
    cover_attempts: int = 20,
    ladder_cap: int | None = None,
) -> Absorber:
    """Cover, then ladders, then one cycle threading every rung.

    ``cover_targets`` defaults to all of V; pass an explicit empty set to
    skip d-cover verification and treat the cover as a pair pool (the
    pipeline does this at desk scale and checks coverage against the
    concrete paths instead).
    """
    tgt = range(g.n) if cover_targets is None else cover_targets
    cover = build_cover(g, tgt, d, m, attempts=cover_attempts, seed=seed)
    ladders = build_ladders(g, cover.pairs, params, per_ladder_cap=ladder_cap)

    rungs: list[list[int]] = []
    for ladder in ladders:
        rungs.extend(ladder.rungs())
    inner: set[int] = set()
    for r in rungs:
        inner.update(r[1:-1])
    sub, vmap = g.delete_vertices(inner)
    sub_params = degraded_after_deletion(params, len(inner), g.n)
    link_pairs = [
        (vmap.old_to_new[rungs[i][-1]], vmap.old_to_new[rungs[(i + 1) % len(rungs)][0]])
        for i in range(len(rungs))
    ]
    sub_links = build_disjoint_paths(sub, link_pairs, sub_params)
    links = [vmap.to_old(p) for p in sub_links]

    cycle: list[int] = []
    for rung, link in zip(rungs, links):
        cycle.extend(rung)
        cycle.extend(link[1:-1])
    absorber = Absorber(
        cover=cover, ladders=tuple(ladders), cycle=tuple(canonical_cycle(cycle)), d=d
    )
    assert absorber.validate(g), "constructed absorber failed structural check"
    return absorber


def assign_cover_pairs(
    g: Digraph, absorber: Absorber, endpoint_pairs: Sequence[tuple[int, int]]
) -> list[int]:
    """Distinct cover-pair index per path target.

    Greedy least-index-first in input order (always succeeds on a true
    d-cover with <= d paths); falls back to maximum matching before
    giving up, so a failure means no distinct assignment exists at all.
    """
    pairs = absorber.cover.pairs
    options = [covering_pairs(g, pairs, t) for t in endpoint_pairs]
    chosen: list[int] = []
    used: set[int] = set()
    for opts in options:
        pick = next((k for k in opts if k not in used), None)
        if pick is None:
            break
        chosen.append(pick)
        used.add(pick)
    if len(chosen) == len(endpoint_pairs):
        return chosen
    match_right = max_bipartite_matching(options, len(options), len(pairs))
    assign = [-1] * len(options)
    for k, j in enumerate(match_right):
        if j != -1:
            assign[j] = k
    if any(a == -1 for a in assign):
        raise AssignmentFailed(
            f"no distinct covering pairs for targets {list(endpoint_pairs)}"
        )
    return assign


def absorb_paths(
    g: Digraph, absorber: Absorber, paths: Sequence[Sequence[int]]
) -> list[int]:
    """Splice up to d vertex-disjoint external paths into the absorber's
    cycle; the result covers V(absorber) plus every path, exactly."""
    if len(paths) > absorber.d:
        raise TooManyPaths(f"{len(paths)} paths exceed absorber d={absorber.d}")
    if not paths:
        return list(absorber.cycle)
    av = absorber.vertices()
    seen: set[int] = set()
    for p in paths:
        ps = set(p)
        if len(ps) != len(p):
            raise PathCollision("path vertices must be distinct")
        if ps & av:
            raise PathCollision("paths must avoid the absorber")
        if ps & seen:
            raise PathCollision("paths must be pairwise vertex-disjoint")
        if any(not g.has_edge(a, b) for a, b in zip(p, p[1:])):
            raise PathCollision("not a path of the graph")
        seen.update(ps)

    targets = [(p[0], p[-1]) for p in paths]
    assignment = assign_cover_pairs(g, absorber, targets)
    cycle = list(absorber.cycle)
    for p, k in zip(paths, assignment):
        u, v = absorber.cover.pairs[k]
        extended = [u, *p, v]
        cycle = absorb_path(g, cycle, absorber.ladders[k], extended)
    return cycle
