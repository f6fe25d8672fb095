"""Short paths and alternating paths via layered robust-neighbourhood search.

Layers grow as N1 = N+(u), N_{i+1} = RN+(N_i) (alternating RN+/RN- for
alternating paths) until a layer holds at least (1-tau)*n vertices; a
backward induction then threads an actual path through the layers.  The
expander guarantee makes each layer grow by mu*n at full scale; at desk
scale we only insist on strict growth and surface a structured
LayerStalled otherwise.

All tie-breaks pick the smallest vertex id, so outputs are deterministic;
pass an rng for randomised robustness testing.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .digraph import Digraph
from .errors import (
    BackwardBlocked,
    EndpointClash,
    InputError,
    LayerStalled,
    LengthExceeded,
)
from .expansion import (
    ExpansionParams,
    degraded_after_deletion,
    robust_in_neighborhood,
    robust_out_neighborhood,
)


@dataclass
class LayerTrace:
    """Record of one layered search: the sets N_i and their directions."""

    layers: list[frozenset[int]] = field(default_factory=list)
    directions: list[str] = field(default_factory=list)
    reached: bool = False
    stalled_at: int | None = None


@dataclass(frozen=True)
class AlternatingPath:
    """Path whose edges alternate direction; always an even vertex count.

    With 1-based positions, odd positions carry a forward edge
    v_p -> v_{p+1} and even positions a backward edge v_{p+1} -> v_p, so
    the first vertex has outdegree 1 and the last has indegree 1.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) % 2 != 0 or len(self.vertices) < 2:
            raise InputError("alternating path needs an even vertex count >= 2")
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("alternating path vertices must be distinct")

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for idx in range(len(self.vertices) - 1):
            a, b = self.vertices[idx], self.vertices[idx + 1]
            if idx % 2 == 0:  # 1-based position idx+1 is odd: forward
                out.append((a, b))
            else:
                out.append((b, a))
        return out

    def validate(self, g: Digraph) -> bool:
        return all(g.has_edge(a, b) for a, b in self.edges())


def default_path_cap(params: ExpansionParams) -> int:
    return math.ceil(1 / params.mu) + 3


def default_alt_path_cap(params: ExpansionParams) -> int:
    return math.ceil(1 / params.mu) + 6


def _grow_layers(
    g: Digraph,
    start: set[int],
    params: ExpansionParams,
    alternate: bool,
    max_layers: int,
) -> LayerTrace:
    """Grow layers until one reaches (1-tau)*n, stalls, or hits max_layers."""
    target = (1 - params.tau) * g.n - 1e-9
    trace = LayerTrace()
    current = set(start)
    trace.layers.append(frozenset(current))
    trace.directions.append("out")
    i = 1
    while len(current) < target:
        if i >= max_layers:
            trace.stalled_at = i
            return trace
        if alternate and i % 2 == 1:
            nxt = robust_in_neighborhood(g, current, params.nu)
            direction = "in"
        else:
            nxt = robust_out_neighborhood(g, current, params.nu)
            direction = "out"
        if len(nxt) < len(current) + 1:
            trace.layers.append(frozenset(nxt))
            trace.directions.append(direction)
            trace.stalled_at = i
            return trace
        current = nxt
        trace.layers.append(frozenset(current))
        trace.directions.append(direction)
        i += 1
    trace.reached = True
    return trace


def _pick(candidates: set[int], rng: random.Random | None) -> int:
    if rng is None:
        return min(candidates)
    return rng.choice(sorted(candidates))


def build_path(
    g: Digraph,
    u: int,
    v: int,
    params: ExpansionParams,
    max_vertices: int | None = None,
    rng: random.Random | None = None,
) -> list[int]:
    """Directed u -> v path with at most max_vertices vertices.

    Layers use RN+ only; backward induction picks x_t in N_t inter N-(v)
    and then each x_i an in-neighbour of x_{i+1}, avoiding chosen
    vertices and {u, v}.
    """
    if u == v:
        raise EndpointClash(f"endpoints must differ, got {u} twice")
    g._check_vertex(u)
    g._check_vertex(v)
    if max_vertices is None:
        max_vertices = default_path_cap(params)
    if max_vertices < 2:
        raise InputError(f"max_vertices must be >= 2, got {max_vertices}")

    trace = _grow_layers(g, set(g.out_neighbors(u)), params, False, max_layers=4 * g.n + 4)
    if not trace.reached:
        i = trace.stalled_at or 0
        raise LayerStalled(i, len(trace.layers[-1]))
    t = len(trace.layers)  # layers are N_1 .. N_t
    if t + 2 > max_vertices:
        raise LengthExceeded(t + 2, max_vertices)

    forbidden = {u, v}
    chosen: list[int] = []
    nxt = v
    for i in range(t, 0, -1):
        layer = set(trace.layers[i - 1])
        cands = layer & set(g.in_neighbors(nxt)) - forbidden
        if not cands:
            raise BackwardBlocked(i)
        x = _pick(cands, rng)
        chosen.append(x)
        forbidden.add(x)
        nxt = x
    chosen.reverse()
    return [u, *chosen, v]


def build_alternating_path(
    g: Digraph,
    u: int,
    v: int,
    params: ExpansionParams,
    max_vertices: int | None = None,
    rng: random.Random | None = None,
) -> AlternatingPath:
    """Alternating path from u to v; interior layer count is the smallest
    multiple of 4 covering the stall-free depth, so the relabelled form
    [x_0 .. x_t x_t* .. x_0*] has t even."""
    if u == v:
        raise EndpointClash(f"endpoints must differ, got {u} twice")
    g._check_vertex(u)
    g._check_vertex(v)
    if max_vertices is None:
        max_vertices = default_alt_path_cap(params)

    trace = _grow_layers(g, set(g.out_neighbors(u)), params, True, max_layers=4 * g.n + 4)
    if not trace.reached:
        i = trace.stalled_at or 0
        raise LayerStalled(i, len(trace.layers[-1]))
    r = len(trace.layers)
    r_prime = ((r + 3) // 4) * 4
    if r_prime + 2 > max_vertices:
        raise LengthExceeded(r_prime + 2, max_vertices)
    # extend the alternating layer sequence out to r'
    layers = [set(s) for s in trace.layers]
    i = r
    while len(layers) < r_prime:
        if i % 2 == 1:
            layers.append(robust_in_neighborhood(g, layers[-1], params.nu))
        else:
            layers.append(robust_out_neighborhood(g, layers[-1], params.nu))
        if not layers[-1]:
            raise LayerStalled(i, 0)
        i += 1

    # Backward induction: y_i in N_i, with an in-neighbour step when i is
    # even (edge y_i -> y_{i+1}) and an out-neighbour step when i is odd.
    forbidden = {u, v}
    chosen: list[int] = []
    cands = layers[r_prime - 1] & set(g.in_neighbors(v)) - forbidden
    if not cands:
        raise BackwardBlocked(r_prime)
    y = _pick(cands, rng)
    chosen.append(y)
    forbidden.add(y)
    for i in range(r_prime - 1, 0, -1):
        if i % 2 == 0:
            cands = layers[i - 1] & set(g.in_neighbors(y)) - forbidden
        else:
            cands = layers[i - 1] & set(g.out_neighbors(y)) - forbidden
        if not cands:
            raise BackwardBlocked(i)
        y = _pick(cands, rng)
        chosen.append(y)
        forbidden.add(y)
    chosen.reverse()
    path = AlternatingPath(tuple([u, *chosen, v]))
    assert path.validate(g), "constructed alternating path failed edge check"
    return path


def build_disjoint_paths(
    g: Digraph,
    pairs: list[tuple[int, int]],
    params: ExpansionParams,
    per_path_cap: int | None = None,
    rng: random.Random | None = None,
) -> list[list[int]]:
    """Vertex-disjoint u_i -> v_i paths, built one at a time on residual
    graphs with earlier paths and later endpoints deleted."""
    endpoints: list[int] = []
    for a, b in pairs:
        endpoints.extend((a, b))
    if len(set(endpoints)) != len(endpoints):
        raise EndpointClash("endpoint vertices must all be distinct")
    for w in endpoints:
        g._check_vertex(w)

    paths: list[list[int]] = []
    used: set[int] = set()
    for idx, (a, b) in enumerate(pairs):
        later: set[int] = set()
        for a2, b2 in pairs[idx + 1:]:
            later.add(a2)
            later.add(b2)
        drop = used | later
        sub, vmap = g.delete_vertices(drop)
        sub_params = degraded_after_deletion(params, len(drop), g.n)
        try:
            sub_path = build_path(
                sub, vmap.old_to_new[a], vmap.old_to_new[b], sub_params,
                max_vertices=per_path_cap, rng=rng,
            )
        except Exception as exc:
            exc.path_index = idx  # tag the failing pair for callers
            raise
        path = vmap.to_old(sub_path)
        paths.append(path)
        used.update(path)
    return paths
