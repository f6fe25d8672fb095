"""Top-level pipeline: cycles of prescribed length through a prescribed vertex.

Stages, given an n-vertex robust expander and a target length ell with a
required vertex v:

  1. build an absorber (cover pairs + ladders + one embedding cycle);
  2. delete its vertices and degrade the expansion parameters;
  3. find a 1-factor of the remainder and merge its cycles down to at
     most d;
  4. open each remaining cycle into a path (cut-edge choice is free);
  5. drop / trim paths until exactly ell - |absorber| path vertices
     remain, never losing v;
  6. absorb the paths into the absorber's cycle and verify.

The guarantees behind stages 1-6 hold for n far beyond desk scale, so
the pipeline runs the construction unconditionally, validates each
stage, retries with derived sub-seeds, and never returns an unverified
cycle.  Cut points and trim offsets are chosen so the resulting
(origin, terminus) pairs are coverable by distinct cover pairs: that
freedom is what lets small instances succeed where a verified whole-graph
d-cover cannot exist.

Graphs with at most ``small_n`` vertices skip all of this and use the
exact subset-DP solver.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, asdict

from .absorber import Absorber, absorb_paths, build_absorber, covering_pairs
from .digraph import Digraph, canonical_cycle, verify_cycle
from .errors import (
    HypothesisViolated,
    InputError,
    PipelineError,
    RobhamError,
    SearchError,
    TooLarge,
)
from .expansion import (
    ExpansionParams,
    _nash_williams_detail,
    degraded_after_deletion,
    dib_transform,
    oriented_params,
)
from .factor import Factor, find_factor, max_bipartite_matching, reduce_cycles


# -- exact small-instance solver ------------------------------------------------

def brute_force_hamilton(
    g: Digraph,
    ell: int | None = None,
    v: int | None = None,
    cap: int = 12,
) -> list[int] | None:
    """Exact search for a cycle of length ell through v (either optional).

    Subset DP per choice of the cycle's minimal vertex, so runtime is
    O(2^n * n^2) regardless of how many cycles exist.  Returns None when
    no cycle matches (proved absent).
    """
    n = g.n
    if n > cap:
        raise TooLarge(f"n={n} exceeds brute-force cap {cap}")
    if ell is not None and (ell < 2 or ell > n):
        return None
    if v is not None:
        g._check_vertex(v)
    for s in range(n):
        if v is not None and v < s:
            break
        m = n - s  # vertices s..n-1, relabelled 0..m-1 with s -> 0
        verts = list(range(s, n))
        # reach[mask][last]: predecessor vertex (or -2 root) for paths from s
        reach: list[dict[int, int]] = [dict() for _ in range(1 << m)]
        reach[1][0] = -2
        best: tuple[int, int] | None = None
        for mask in range(1, 1 << m):
            if not (mask & 1):
                continue
            row = reach[mask]
            if not row:
                continue
            size = mask.bit_count()
            closable = (ell is None or size == ell) and (
                v is None or (mask >> (v - s)) & 1
            )
            if closable:
                for last in row:
                    if g.has_edge(verts[last], s) and size >= 2:
                        best = (mask, last)
                        break
                if best:
                    break
            if ell is not None and size >= ell:
                continue
            for last in sorted(row):
                for w in g.out_neighbors(verts[last]):
                    if w < s:
                        continue
                    wi = w - s
                    bit = 1 << wi
                    if mask & bit:
                        continue
                    nxt = reach[mask | bit]
                    if wi not in nxt:
                        nxt[wi] = last
            if best:
                break
        if best:
            mask, last = best
            path = []
            while last != -2:
                path.append(verts[last])
                prev = reach[mask][last]
                mask ^= 1 << last
                last = prev
            path.reverse()
            return path
    return None


# -- configuration and reporting --------------------------------------------------

#: rough per-cover-pair vertex footprint of an absorber on a dense graph
#: (alternating path + one connector + two linking-path interiors)
PAIR_FOOTPRINT = 14


@dataclass
class StageCaps:
    """Knobs for the best-effort stages; defaults suit dense desk inputs."""

    retries: int = 4
    small_n: int = 12
    brute_cap: int = 12
    cover_attempts: int = 20
    ladder_cap: int | None = None
    reduce_round_cap: int | None = None
    max_cover_pairs: int = 25


@dataclass
class PipelineConfig:
    params: ExpansionParams
    d_override: int | None = None
    m_override: int | None = None
    seed: int = 0
    caps: StageCaps = field(default_factory=StageCaps)

    @property
    def xi(self) -> float:
        """Full-scale merge threshold mu*nu/32 (reported; desk runs clamp)."""
        return self.params.mu * self.params.nu / 32

    @property
    def d_paper(self) -> int:
        return math.ceil(2 / self.xi)

    @property
    def T(self) -> float:
        return max(1 / self.params.mu, 1 / self.params.nu)


@dataclass
class AttemptReport:
    seed: int
    absorber_size: int | None = None
    cover_pairs: int | None = None
    factor_cycles: int | None = None
    reduced_cycles: int | None = None
    paths_dropped: int | None = None
    tail_trimmed: int | None = None
    paths_absorbed: int | None = None
    error: str | None = None
    stage: str | None = None


@dataclass
class PipelineReport:
    n: int
    ell: int
    through: int
    params: dict
    seed: int
    xi_full_scale: float
    d_full_scale: int
    d_effective: int
    m_effective: int
    small_n_path: bool = False
    warnings: list[str] = field(default_factory=list)
    attempts: list[AttemptReport] = field(default_factory=list)
    cycle: list[int] | None = None
    stage_ms: dict = field(default_factory=dict)

    def to_json(self, include_timings: bool = False) -> str:
        doc = asdict(self)
        if not include_timings:
            doc.pop("stage_ms")
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# -- stage helpers ----------------------------------------------------------------

def _plan_sizes(n: int, ell: int, cfg: PipelineConfig) -> tuple[int, int]:
    """Effective (d, m): full-scale values are astronomically large at
    desk scale, so clamp to an absorber budget that leaves room for ell
    and for a factor on what remains."""
    budget = max(min(n // 3, max(ell - 8, 0), n // 2 - 4), 0)
    fit_cap = max(1, (n - 10) // PAIR_FOOTPRINT)
    m = min(
        max(3, budget // PAIR_FOOTPRINT),
        fit_cap,
        cfg.caps.max_cover_pairs,
        max(n // 2 - 1, 1),
    )
    if cfg.m_override is not None:
        m = cfg.m_override
    m = max(m, 1)
    d = min(cfg.d_override if cfg.d_override is not None else cfg.d_paper, m)
    d = max(d, 1)
    return d, m


def _cut_and_trim_plan(
    cycles: list[tuple[int, ...]],
    total_needed: int,
    v: int | None,
) -> tuple[list[tuple[tuple[int, ...], int]], int, int]:
    """Choose which factor cycles survive as paths and how long each stays.

    Paths sorted descending by length; whole paths are dropped greedily
    while the total exceeds the target, then one path loses the final
    overshoot from its tail.  The path holding v is never dropped and
    never trimmed below v.  Returns (kept (cycle, keep_len) list,
    dropped count, trimmed count).
    """
    order = sorted(cycles, key=lambda c: (-len(c), min(c)))
    v_cycle = None
    if v is not None:
        for c in order:
            if v in c:
                v_cycle = c
                break
    total = sum(len(c) for c in order)
    if total_needed > total:
        raise PipelineError(
            "TrimInfeasible",
            f"need {total_needed} path vertices, factor only has {total}",
        )
    kept: list[tuple[int, ...]] = []
    dropped = 0
    for c in order:
        if c is not v_cycle and total - len(c) >= total_needed:
            total -= len(c)
            dropped += 1
        else:
            kept.append(c)
    overshoot = total - total_needed
    if overshoot == 0:
        return [(c, len(c)) for c in kept], dropped, 0
    plan: list[tuple[tuple[int, ...], int]] = []
    trimmed_from = None
    for c in kept:
        if trimmed_from is None and len(c) - overshoot >= 1:
            trimmed_from = c
            plan.append((c, len(c) - overshoot))
        else:
            plan.append((c, len(c)))
    if trimmed_from is None:
        raise PipelineError(
            "TrimInfeasible",
            f"overshoot {overshoot} cannot come off any single kept path",
        )
    return plan, dropped, overshoot


def _realize_paths(
    g: Digraph,
    absorber: Absorber,
    plan: list[tuple[tuple[int, ...], int]],
    v: int | None,
) -> list[list[int]]:
    """Pick a cut point per kept cycle so each resulting (origin, terminus)
    pair is covered by a distinct cover pair; maximum matching decides.

    For a cycle of length s kept at length L, the candidates are the s
    rotations, restricted to those keeping v in the prefix when the
    cycle holds v.
    """
    pairs = absorber.cover.pairs
    candidates: list[list[tuple[int, int, int]]] = []  # (start_idx, origin, ter)
    for cyc, keep in plan:
        s = len(cyc)
        opts = []
        pos_v = cyc.index(v) if (v is not None and v in cyc) else None
        for start in range(s):
            if pos_v is not None and (pos_v - start) % s > keep - 1:
                continue
            origin = cyc[start]
            ter = cyc[(start + keep - 1) % s]
            opts.append((start, origin, ter))
        candidates.append(opts)

    adj: list[list[int]] = []
    option_for: list[dict[int, tuple[int, int, int]]] = []
    for opts in candidates:
        row: list[int] = []
        chosen: dict[int, tuple[int, int, int]] = {}
        for k in range(len(pairs)):
            for start, origin, ter in opts:
                if covering_pairs(g, [pairs[k]], (origin, ter)):
                    row.append(k)
                    chosen[k] = (start, origin, ter)
                    break
        adj.append(row)
        option_for.append(chosen)
    match_right = max_bipartite_matching(adj, len(adj), len(pairs))
    assign = [-1] * len(adj)
    for k, j in enumerate(match_right):
        if j != -1:
            assign[j] = k
    if any(a == -1 for a in assign):
        raise PipelineError(
            "AbsorbFailed",
            "no distinct covering pairs for the cut paths (all rotations tried)",
        )
    paths: list[list[int]] = []
    for (cyc, keep), k, chosen in zip(plan, assign, option_for):
        start, _origin, _ter = chosen[k]
        s = len(cyc)
        paths.append([cyc[(start + i) % s] for i in range(keep)])
    return paths


# -- the pipeline -------------------------------------------------------------------

def find_cycle_through(
    g: Digraph, ell: int, v: int, cfg: PipelineConfig
) -> tuple[list[int], PipelineReport]:
    """Verified cycle of length exactly ell through v, plus a stage report."""
    n = g.n
    if not (1 <= ell <= n):
        raise InputError(f"need 1 <= ell <= n, got ell={ell}, n={n}")
    g._check_vertex(v)
    params = cfg.params
    d_eff, m_eff = _plan_sizes(n, ell, cfg)
    report = PipelineReport(
        n=n,
        ell=ell,
        through=v,
        params={"mu": params.mu, "nu": params.nu, "tau": params.tau, "gamma": params.gamma},
        seed=cfg.seed,
        xi_full_scale=cfg.xi,
        d_full_scale=cfg.d_paper,
        d_effective=d_eff,
        m_effective=m_eff,
    )
    if ell < min(params.mu, params.nu) * n / 2:
        report.warnings.append(
            "requested length below the guaranteed range min(mu,nu)*n/2"
        )

    if n <= cfg.caps.small_n:
        report.small_n_path = True
        t0 = time.perf_counter()
        cycle = brute_force_hamilton(g, ell=ell, v=v, cap=max(cfg.caps.brute_cap, n))
        report.stage_ms["brute_force"] = (time.perf_counter() - t0) * 1000
        if cycle is None:
            raise PipelineError(
                "BruteForceExhausted",
                f"no cycle of length {ell} through {v} exists (proved by enumeration)",
            )
        cycle = canonical_cycle(cycle)
        assert verify_cycle(g, cycle, ell, v)
        report.cycle = cycle
        return cycle, report

    last_error: Exception | None = None
    for attempt_idx in range(cfg.caps.retries):
        attempt_seed = cfg.seed * 1000 + attempt_idx
        attempt = AttemptReport(seed=attempt_seed)
        report.attempts.append(attempt)
        try:
            cycle = _run_stages(g, ell, v, cfg, d_eff, m_eff, attempt_seed, attempt, report)
            gate = verify_cycle(g, cycle, ell, v)
            assert gate, f"verification gate failed: {gate.reason}"
            report.cycle = cycle
            return cycle, report
        except SearchError as exc:
            attempt.error = str(exc)
            attempt.stage = getattr(exc, "stage", type(exc).__name__)
            last_error = exc
    if isinstance(last_error, PipelineError):
        raise last_error
    raise PipelineError("AbsorberFailed", str(last_error), cause=last_error)


def _run_stages(
    g: Digraph,
    ell: int,
    v: int,
    cfg: PipelineConfig,
    d_eff: int,
    m_eff: int,
    seed: int,
    attempt: AttemptReport,
    report: PipelineReport,
) -> list[int]:
    params = cfg.params
    caps = cfg.caps
    timer = time.perf_counter

    # Stage 1: absorber with an unverified pair pool as the cover
    # (coverage is enforced against the concrete paths in stage 5).
    t0 = timer()
    try:
        absorber = build_absorber(
            g, d_eff, params, m_eff,
            seed=seed,
            cover_targets=(),
            cover_attempts=caps.cover_attempts,
            ladder_cap=caps.ladder_cap,
        )
    except SearchError as exc:
        raise PipelineError("AbsorberFailed", str(exc), cause=exc)
    finally:
        report.stage_ms["absorber"] = report.stage_ms.get("absorber", 0.0) + (
            (timer() - t0) * 1000
        )
    absorber_vertices = absorber.vertices()
    attempt.absorber_size = len(absorber_vertices)
    attempt.cover_pairs = len(absorber.cover.pairs)

    total_needed = ell - len(absorber_vertices)
    if total_needed < 0:
        raise PipelineError(
            "TrimInfeasible",
            f"absorber holds {len(absorber_vertices)} vertices, more than ell={ell}",
        )
    if total_needed == 0 and v not in absorber_vertices:
        raise PipelineError(
            "TrimInfeasible",
            f"ell equals the absorber size but v={v} is outside the absorber",
        )

    # Stage 2: residual graph and degraded parameters.
    sub, vmap = g.delete_vertices(absorber_vertices)
    if sub.n < 2:
        raise PipelineError("FactorFailed", "absorber consumed the whole graph")
    sub_params = degraded_after_deletion(params, len(absorber_vertices), g.n)
    measured = sub.min_semi_degree() / sub.n if sub.n else 0.0
    if 0 < measured < 1:
        sub_params = sub_params.with_gamma(measured)

    # Stage 3: 1-factor, then merge cycles until at most d_eff remain.
    t0 = timer()
    try:
        factor = find_factor(sub)
    except SearchError as exc:
        raise PipelineError("FactorFailed", str(exc), cause=exc)
    finally:
        report.stage_ms["factor"] = report.stage_ms.get("factor", 0.0) + (
            (timer() - t0) * 1000
        )
    attempt.factor_cycles = len(factor.cycles)

    xi_eff = min(2 / d_eff, 0.99)
    t0 = timer()
    reduced = reduce_cycles(
        sub, factor, xi_eff,
        round_cap=caps.reduce_round_cap,
        params=sub_params,
        target_count=d_eff,
    )
    report.stage_ms["reduce"] = report.stage_ms.get("reduce", 0.0) + (
        (timer() - t0) * 1000
    )
    attempt.reduced_cycles = reduced.cycle_count
    if reduced.cycle_count > d_eff:
        raise PipelineError(
            "ReductionFailed",
            f"{reduced.cycle_count} cycles remain, absorber takes {d_eff}"
            + (f" ({reduced.failure})" if reduced.failure else ""),
        )

    # Stages 4+5: cut each cycle, drop and trim to the exact total,
    # choosing cut points whose endpoint pairs distinct cover pairs cover.
    v_sub = vmap.old_to_new[v] if v not in absorber_vertices else None
    t0 = timer()
    plan, dropped, trimmed = _cut_and_trim_plan(
        list(reduced.factor.cycles), total_needed, v_sub
    )
    attempt.paths_dropped = dropped
    attempt.tail_trimmed = trimmed

    # matching works on original ids: translate cycles out of the subgraph
    plan_orig = [(tuple(vmap.to_old(c)), keep) for c, keep in plan]
    paths = _realize_paths(g, absorber, plan_orig, v if v_sub is not None else None)
    report.stage_ms["cut_trim"] = report.stage_ms.get("cut_trim", 0.0) + (
        (timer() - t0) * 1000
    )
    attempt.paths_absorbed = len(paths)

    # Stage 6: absorb.
    t0 = timer()
    try:
        cycle = absorb_paths(g, absorber, paths)
    except SearchError as exc:
        raise PipelineError("AbsorbFailed", str(exc), cause=exc)
    finally:
        report.stage_ms["absorb"] = report.stage_ms.get("absorb", 0.0) + (
            (timer() - t0) * 1000
        )
    return canonical_cycle(cycle)


def find_hamilton(g: Digraph, cfg: PipelineConfig) -> tuple[list[int], PipelineReport]:
    """Hamilton cycle: length n through vertex 0."""
    if g.n < 1:
        raise InputError("graph must have at least one vertex")
    return find_cycle_through(g, g.n, 0, cfg)


def find_hamilton_outexpander(
    g: Digraph,
    nu: float,
    tau: float,
    gamma: float,
    cfg: PipelineConfig | None = None,
) -> tuple[list[int], PipelineReport]:
    """Hamilton cycle in a one-sided (nu, tau)-outexpander with semi-degree
    gamma*n: transform to two-sided parameters, then run the pipeline."""
    mu2, nu2, tau2 = dib_transform(nu, tau, gamma)
    params = ExpansionParams(mu=mu2, nu=nu2, tau=tau2, gamma=gamma)
    if cfg is None:
        cfg = PipelineConfig(params=params)
    else:
        cfg = PipelineConfig(
            params=params,
            d_override=cfg.d_override,
            m_override=cfg.m_override,
            seed=cfg.seed,
            caps=cfg.caps,
        )
    return find_hamilton(g, cfg)


def oriented_hamilton(
    g: Digraph, eps: float, cfg: PipelineConfig | None = None
) -> tuple[list[int], PipelineReport]:
    """Hamilton cycle in an oriented graph with delta^0 > (3/8 + eps) n."""
    ok, digon = g.is_oriented()
    if not ok:
        raise InputError(f"graph is not oriented: digon between {digon[0]} and {digon[1]}")
    if g.min_semi_degree() <= (3 / 8 + eps) * g.n:
        raise PipelineError(
            "DegreeTooLow",
            f"delta^0={g.min_semi_degree()} <= (3/8 + {eps})*{g.n}",
        )
    nu, tau = oriented_params(eps)
    if not tau < 1:
        raise HypothesisViolated(f"2*eps must stay below 1, got {tau}")
    gamma = g.min_semi_degree() / g.n
    return find_hamilton_outexpander(g, nu, tau, gamma, cfg)


def nash_williams_hamilton(
    g: Digraph, gamma: float, cfg: PipelineConfig | None = None
) -> tuple[list[int], PipelineReport]:
    """Hamilton cycle under the degree-sequence condition: tau = gamma/4,
    nu = tau^2 (the expansion implication is assumed, not re-derived)."""
    outs, ins = g.degree_sequences()
    ok, bad_index = _nash_williams_detail(outs, ins, gamma)
    if not ok:
        raise PipelineError(
            "ConditionFailed", f"degree-sequence condition fails at i={bad_index}"
        )
    if g.min_semi_degree() < gamma * g.n - 1e-9:
        raise PipelineError(
            "ConditionFailed",
            f"delta^0={g.min_semi_degree()} below gamma*n={gamma * g.n}",
        )
    tau = gamma / 4
    nu = tau * tau
    return find_hamilton_outexpander(g, nu, tau, gamma, cfg)
