"""Seedable graph generators for the CLI and benchmarks."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .digraph import Digraph
from .errors import InvalidSpec

KINDS = ("random_dnp", "blowup_c5", "oriented_random", "complete")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 0
    p: float = 0.5
    part_size: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown generator kind {self.kind!r}")
        if self.kind == "blowup_c5":
            if self.part_size < 1:
                raise InvalidSpec("part_size must be >= 1")
        elif self.n < 0:
            raise InvalidSpec("n must be non-negative")
        if self.kind in ("random_dnp", "oriented_random") and not (0 <= self.p <= 1):
            raise InvalidSpec(f"p must be in [0,1], got {self.p}")


def generate(spec: GeneratorSpec) -> Digraph:
    if spec.kind == "random_dnp":
        return random_digraph(spec.n, spec.p, spec.seed)
    if spec.kind == "blowup_c5":
        return blowup_c5(spec.part_size)
    if spec.kind == "oriented_random":
        return oriented_random(spec.n, spec.p, spec.seed)
    if spec.kind == "complete":
        return complete_digraph(spec.n)
    raise InvalidSpec(spec.kind)


def random_digraph(n: int, p: float, seed: int) -> Digraph:
    """D(n, p): each ordered pair independently an edge with probability p."""
    rng = random.Random(f"dnp:{seed}")
    g = Digraph(n)
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                g.add_edge(u, v)
    return g


def blowup_c5(part_size: int) -> Digraph:
    """Pentagon blow-up: 5 parts, complete bipartite edges in both
    directions between consecutive parts, nothing inside a part.

    Both orientations are needed for the structure to certify as a
    robust expander (a one-way version is refuted by any single part).
    """
    n = 5 * part_size
    g = Digraph(n)
    for i in range(5):
        j = (i + 1) % 5
        for a in range(part_size):
            for b in range(part_size):
                u = i * part_size + a
                v = j * part_size + b
                g.add_edge(u, v)
                g.add_edge(v, u)
    return g


def oriented_random(n: int, p: float, seed: int) -> Digraph:
    """Digon-free random graph: each unordered pair present with
    probability p, orientation a fair coin."""
    rng = random.Random(f"oriented:{seed}")
    g = Digraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                if rng.random() < 0.5:
                    g.add_edge(u, v)
                else:
                    g.add_edge(v, u)
    return g


def complete_digraph(n: int) -> Digraph:
    g = Digraph(n)
    for u in range(n):
        for v in range(n):
            if u != v:
                g.add_edge(u, v)
    return g
