"""Loop-free simple digraph with dense integer vertex ids.

Adjacency is kept in both directions (the in-map is always the exact
transpose of the out-map), plus a lazily materialised boolean matrix for
vectorised neighbourhood counting.  Vertex ids are the integers 0..n-1
and neighbour iteration is always in ascending id order, which keeps
every algorithm built on top deterministic under a fixed seed.

Digons (both orientations of a pair) are allowed; loops are rejected at
insertion.  The on-disk format is a plain edge list: first line ``n m``,
then ``m`` lines ``u v`` meaning the edge u->v.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import LoopRejected, OutOfRange, ParseError


class Digraph:
    """Simple directed graph on vertices 0..n-1, no loops, digons allowed."""

    __slots__ = ("n", "_out", "_in", "_matrix", "_out_sorted", "_in_sorted")

    def __init__(self, n: int):
        if n < 0:
            raise OutOfRange(f"vertex count must be non-negative, got {n}")
        self.n = n
        self._out: list[set[int]] = [set() for _ in range(n)]
        self._in: list[set[int]] = [set() for _ in range(n)]
        self._matrix: np.ndarray | None = None
        self._out_sorted: list[tuple[int, ...]] | None = None
        self._in_sorted: list[tuple[int, ...]] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    # -- mutation ----------------------------------------------------------

    def add_edge(self, u: int, v: int) -> "Digraph":
        """Insert edge u->v (idempotent).  Rejects loops and bad ids."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise LoopRejected(f"loop {u}->{u} rejected")
        if v not in self._out[u]:
            self._out[u].add(v)
            self._in[v].add(u)
            self._matrix = None
            self._out_sorted = None
            self._in_sorted = None
        return self

    # -- queries -----------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise OutOfRange(f"vertex {v} not in [0, {self.n})")

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._out[u]

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        if self._out_sorted is None:
            self._out_sorted = [tuple(sorted(s)) for s in self._out]
        return self._out_sorted[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        if self._in_sorted is None:
            self._in_sorted = [tuple(sorted(s)) for s in self._in]
        return self._in_sorted[v]

    def out_degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._in[v])

    @property
    def matrix(self) -> np.ndarray:
        """Boolean adjacency matrix, matrix[u, v] == (u->v present).

        Treat as read-only; it is cached and shared between callers.
        """
        if self._matrix is None:
            mat = np.zeros((self.n, self.n), dtype=bool)
            for u, nbrs in enumerate(self._out):
                if nbrs:
                    mat[u, sorted(nbrs)] = True
            self._matrix = mat
        return self._matrix

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.out_neighbors(u):
                yield (u, v)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self._out)

    def min_semi_degree(self) -> int:
        """min over vertices of min(outdegree, indegree)."""
        if self.n == 0:
            return 0
        return min(min(len(self._out[v]), len(self._in[v])) for v in range(self.n))

    def degree_sequences(self) -> tuple[list[int], list[int]]:
        """Ascending out-degree and in-degree sequences."""
        outs = sorted(len(s) for s in self._out)
        ins = sorted(len(s) for s in self._in)
        return outs, ins

    def delete_vertices(self, drop: Iterable[int]) -> tuple["Digraph", "VertexMap"]:
        """Induced subgraph on the complement of ``drop``, plus an id map."""
        drop_set = set(drop)
        for v in drop_set:
            self._check_vertex(v)
        keep = [v for v in range(self.n) if v not in drop_set]
        old_to_new = [-1] * self.n
        for new, old in enumerate(keep):
            old_to_new[old] = new
        sub = Digraph(len(keep))
        for old in keep:
            nu = old_to_new[old]
            row = self._out[old]
            for w in row:
                nw = old_to_new[w]
                if nw >= 0:
                    sub._out[nu].add(nw)
                    sub._in[nw].add(nu)
        return sub, VertexMap(tuple(old_to_new), tuple(keep))

    def is_oriented(self) -> tuple[bool, tuple[int, int] | None]:
        """True if the graph has no digons; else returns one digon."""
        for u in range(self.n):
            for v in self._out[u]:
                if u < v and u in self._out[v]:
                    return False, (u, v)
        return True, None

    def copy(self) -> "Digraph":
        g = Digraph(self.n)
        g._out = [set(s) for s in self._out]
        g._in = [set(s) for s in self._in]
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self._out == other._out

    def __hash__(self):  # pragma: no cover - graphs are not hashable
        raise TypeError("Digraph is unhashable")

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class VertexMap:
    """Bijection between surviving old ids and dense new ids."""

    old_to_new: tuple[int, ...]
    new_to_old: tuple[int, ...]

    def to_new(self, vertices: Sequence[int]) -> list[int]:
        out = []
        for v in vertices:
            w = self.old_to_new[v]
            if w < 0:
                raise OutOfRange(f"vertex {v} was deleted")
            out.append(w)
        return out

    def to_old(self, vertices: Sequence[int]) -> list[int]:
        return [self.new_to_old[v] for v in vertices]


# -- path / cycle verification ---------------------------------------------

@dataclass(frozen=True)
class CycleReport:
    """Outcome of a cycle check; ``reason`` names the first violation."""

    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_path(g: Digraph, vertices: Sequence[int]) -> CycleReport:
    """True iff ``vertices`` is a nonempty directed path of distinct vertices."""
    if len(vertices) == 0:
        return CycleReport(False, "empty path")
    for v in vertices:
        if not (0 <= v < g.n):
            return CycleReport(False, f"vertex {v} out of range")
    if len(set(vertices)) != len(vertices):
        return CycleReport(False, "repeated vertex")
    for a, b in zip(vertices, vertices[1:]):
        if not g.has_edge(a, b):
            return CycleReport(False, f"missing edge {a}->{b}")
    return CycleReport(True)


def verify_cycle(
    g: Digraph,
    vertices: Sequence[int],
    required_length: int | None = None,
    through: int | None = None,
) -> CycleReport:
    """Check a directed cycle, optionally of exact length / through a vertex.

    Accepts any rotation of a valid cycle.  Digons (length 2) are legal
    cycles because both orientations of a pair may be present.
    """
    if len(vertices) < 2:
        return CycleReport(False, "cycle needs at least 2 vertices")
    for v in vertices:
        if not (0 <= v < g.n):
            return CycleReport(False, f"vertex {v} out of range")
    if len(set(vertices)) != len(vertices):
        return CycleReport(False, "repeated vertex")
    k = len(vertices)
    for i in range(k):
        a, b = vertices[i], vertices[(i + 1) % k]
        if not g.has_edge(a, b):
            return CycleReport(False, f"missing edge {a}->{b}")
    if required_length is not None and k != required_length:
        return CycleReport(False, f"length {k} != required {required_length}")
    if through is not None and through not in set(vertices):
        return CycleReport(False, f"vertex {through} not on cycle")
    return CycleReport(True)


def verify_hamilton(g: Digraph, vertices: Sequence[int]) -> CycleReport:
    return verify_cycle(g, vertices, required_length=g.n)


def canonical_cycle(vertices: Sequence[int]) -> list[int]:
    """Rotate a cycle so its smallest vertex comes first (canonical form)."""
    k = min(range(len(vertices)), key=lambda i: vertices[i])
    return list(vertices[k:]) + list(vertices[:k])


# -- edge-list file format ---------------------------------------------------

def parse_edge_list(text: str) -> Digraph:
    """Parse the ``n m`` / ``u v`` edge-list format.

    Duplicate edge lines collapse; a loop line ``u u`` is a parse error.
    """
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ParseError("empty edge-list file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError(f"non-integer header {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise ParseError("negative counts in header")
    if len(lines) - 1 != m:
        raise ParseError(f"header declares {m} edges, file has {len(lines) - 1}")
    g = Digraph(n)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"bad edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"non-integer edge line {ln!r}") from exc
        if u == v:
            raise ParseError(f"loop line {ln!r}")
        try:
            g.add_edge(u, v)
        except OutOfRange as exc:
            raise ParseError(str(exc)) from exc
    return g


def format_edge_list(g: Digraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def load_edge_list(path) -> Digraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def save_edge_list(g: Digraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))
