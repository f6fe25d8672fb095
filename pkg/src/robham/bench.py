"""Benchmark harness: pipeline success rates over a (n, p) grid.

Probes how far below dense the pipeline keeps working; the interesting
regime is p approaching log(n)/n, where Hamiltonicity itself dies.
Timings are wall-clock and therefore the one non-deterministic column.
"""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .digraph import verify_cycle
from .errors import RobhamError
from .expansion import ExpansionParams
from .generate import random_digraph
from .pipeline import PipelineConfig, find_hamilton

CSV_HEADER = "n,p,trials,successes,median_ms,absorber_size_mean"


@dataclass(frozen=True)
class BenchRow:
    n: int
    p: float
    trials: int
    successes: int
    median_ms: float
    absorber_size_mean: float

    def to_csv(self) -> str:
        return (
            f"{self.n},{self.p},{self.trials},{self.successes},"
            f"{self.median_ms:.3f},{self.absorber_size_mean:.2f}"
        )


def default_params(gamma: float = 0.3) -> ExpansionParams:
    return ExpansionParams(mu=0.1, nu=0.1, tau=0.1, gamma=gamma)


def run_cell(n: int, p: float, trials: int, seed: int) -> BenchRow:
    successes = 0
    times: list[float] = []
    absorber_sizes: list[int] = []
    for trial in range(trials):
        trial_seed = seed * 10_000 + trial
        g = random_digraph(n, p, trial_seed)
        gamma = g.min_semi_degree() / n if n else 0.0
        gamma = min(max(gamma, 0.01), 0.99)
        cfg = PipelineConfig(params=default_params(gamma), seed=trial_seed)
        t0 = time.perf_counter()
        try:
            cycle, report = find_hamilton(g, cfg)
            if verify_cycle(g, cycle, n):
                successes += 1
            for att in report.attempts:
                if att.absorber_size is not None:
                    absorber_sizes.append(att.absorber_size)
                    break
        except RobhamError:
            pass
        times.append((time.perf_counter() - t0) * 1000)
    return BenchRow(
        n=n,
        p=p,
        trials=trials,
        successes=successes,
        median_ms=statistics.median(times) if times else 0.0,
        absorber_size_mean=(
            sum(absorber_sizes) / len(absorber_sizes) if absorber_sizes else 0.0
        ),
    )


def run_grid(
    n_list: list[int], p_list: list[float], trials: int, seed: int
) -> list[BenchRow]:
    rows = []
    for n in n_list:
        for p in p_list:
            rows.append(run_cell(n, p, trials, seed))
    return rows


def to_csv(rows: list[BenchRow]) -> str:
    lines = [CSV_HEADER]
    lines.extend(r.to_csv() for r in rows)
    return "\n".join(lines) + "\n"
