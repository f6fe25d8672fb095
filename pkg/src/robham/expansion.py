"""Robust neighbourhoods, expansion certification, and parameter transforms.

A set S robustly out-reaches the vertices that have many in-neighbours
inside S.  The graph is a robust (mu, nu, tau)-outexpander when every S
in the admissible size window [tau*n, (1-tau)*n] satisfies
|RN+_nu(S)| >= |S| + mu*n, and an inexpander for the mirrored direction;
"expander" means both.

Threshold convention: cardinality thresholds nu*n and mu*n round up
(a count of in-neighbours is an integer, so >= ceil(x) and >= x agree),
while the admissible window is compared with real arithmetic.  Certified
instances therefore satisfy the real-valued inequalities exactly.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .digraph import Digraph
from .errors import (
    HypothesisViolated,
    InputError,
    LengthMismatch,
    ParamInvalid,
    ParamUnderflow,
    TooLarge,
)

_EPS = 1e-9


def ceil_count(frac: float, n: int) -> int:
    """ceil(frac*n) robust to float noise (0.1*500 must give 50, not 51)."""
    return max(0, math.ceil(frac * n - _EPS))


@dataclass(frozen=True)
class ExpansionParams:
    """(mu, nu, tau) expansion parameters plus the semi-degree fraction gamma."""

    mu: float
    nu: float
    tau: float
    gamma: float

    def __post_init__(self):
        if not (0 < self.mu <= self.tau < 1):
            raise ParamInvalid(f"need 0 < mu <= tau < 1, got mu={self.mu}, tau={self.tau}")
        if not (0 < self.nu <= self.tau):
            raise ParamInvalid(f"need 0 < nu <= tau, got nu={self.nu}, tau={self.tau}")
        if not (0 < self.gamma < 1):
            raise ParamInvalid(f"need 0 < gamma < 1, got gamma={self.gamma}")

    def with_gamma(self, gamma: float) -> "ExpansionParams":
        return replace(self, gamma=gamma)


def admissible_sizes(tau: float, n: int) -> tuple[int, int]:
    """Integer size window [lo, hi] for tau*n <= |S| <= (1-tau)*n."""
    lo = max(0, math.ceil(tau * n - _EPS))
    hi = min(n, math.floor((1 - tau) * n + _EPS))
    return lo, hi


def robust_out_neighborhood(g: Digraph, S: Iterable[int], nu: float) -> set[int]:
    """Vertices with at least ceil(nu*n) in-neighbours inside S."""
    members = sorted(set(S))
    if not members:
        return set()
    thresh = max(1, ceil_count(nu, g.n))
    counts = g.matrix[members, :].sum(axis=0)
    return set(np.nonzero(counts >= thresh)[0].tolist())


def robust_in_neighborhood(g: Digraph, S: Iterable[int], nu: float) -> set[int]:
    """Vertices with at least ceil(nu*n) out-neighbours inside S."""
    members = sorted(set(S))
    if not members:
        return set()
    thresh = max(1, ceil_count(nu, g.n))
    counts = g.matrix[:, members].sum(axis=1)
    return set(np.nonzero(counts >= thresh)[0].tolist())


CERTIFIED = "CertifiedExpander"
REFUTED = "RefutedWithWitness"
NOT_REFUTED = "NotRefuted"


@dataclass(frozen=True)
class ExpansionVerdict:
    status: str
    witness: tuple[int, ...] | None
    params: ExpansionParams
    trials: int
    seed: int | None

    def to_json_dict(self) -> dict:
        p = self.params
        return {
            "status": self.status,
            "witness": list(self.witness) if self.witness is not None else None,
            "params": {"mu": p.mu, "nu": p.nu, "tau": p.tau, "gamma": p.gamma},
            "trials": self.trials,
            "seed": self.seed,
        }


def violates(g: Digraph, params: ExpansionParams, S: Iterable[int], mode: str = "both") -> bool:
    """Re-check one admissible set S directly against the definition.

    Used as the independent oracle when re-validating witnesses.  Returns
    True iff S is inside the size window and fails the inequality in at
    least one of the requested directions.
    """
    S = set(S)
    lo, hi = admissible_sizes(params.tau, g.n)
    if not (lo <= len(S) <= hi):
        return False
    growth = max(1, ceil_count(params.mu, g.n))
    if mode in ("out", "both"):
        if len(robust_out_neighborhood(g, S, params.nu)) < len(S) + growth:
            return True
    if mode in ("in", "both"):
        if len(robust_in_neighborhood(g, S, params.nu)) < len(S) + growth:
            return True
    return False


def _check_mode(mode: str) -> None:
    if mode not in ("out", "in", "both"):
        raise InputError(f"mode must be out/in/both, got {mode!r}")


def certify_exhaustive(
    g: Digraph,
    params: ExpansionParams,
    mode: str = "both",
    cap: int = 20,
) -> ExpansionVerdict:
    """Scan every admissible S; certify or refute with a minimal-size witness.

    2^n subsets, so refuses graphs above ``cap`` vertices.  Within a size
    class, subsets are visited in lexicographic order and the first
    violation wins, making witnesses deterministic.
    """
    _check_mode(mode)
    if g.n > cap:
        raise TooLarge(f"n={g.n} exceeds exhaustive cap {cap}")
    lo, hi = admissible_sizes(params.tau, g.n)
    growth = max(1, ceil_count(params.mu, g.n))
    thresh = max(1, ceil_count(params.nu, g.n))
    mat = g.matrix.astype(np.float32)
    matT = mat.T.copy()
    checked = 0
    for k in range(lo, hi + 1):
        if k == 0:
            # RN of the empty set is empty: refuted unless growth demands <= 0.
            checked += 1
            if 0 < 0 + growth:
                return ExpansionVerdict(REFUTED, (), params, checked, None)
            continue
        combos = list(itertools.combinations(range(g.n), k))
        rows = np.zeros((len(combos), g.n), dtype=np.float32)
        for r, c in enumerate(combos):
            rows[r, c] = 1.0
        checked += len(combos)
        bad = None
        if mode in ("out", "both"):
            sizes = ((rows @ mat) >= thresh).sum(axis=1)
            fail = np.nonzero(sizes < k + growth)[0]
            if fail.size:
                bad = combos[int(fail[0])]
        if bad is None and mode in ("in", "both"):
            sizes = ((rows @ matT) >= thresh).sum(axis=1)
            fail = np.nonzero(sizes < k + growth)[0]
            if fail.size:
                bad = combos[int(fail[0])]
        if bad is not None:
            return ExpansionVerdict(REFUTED, tuple(bad), params, checked, None)
    return ExpansionVerdict(CERTIFIED, None, params, checked, None)


def refute_sampling(
    g: Digraph,
    params: ExpansionParams,
    trials: int,
    seed: int,
    mode: str = "both",
) -> ExpansionVerdict:
    """Monte-Carlo refuter: samples admissible sets, never certifies.

    Sizes are drawn uniformly from the admissible window, then a uniform
    set of that size; violations concentrate at the window boundary so
    this spreads probe mass there too.
    """
    _check_mode(mode)
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    lo, hi = admissible_sizes(params.tau, g.n)
    if lo > hi or g.n == 0:
        return ExpansionVerdict(NOT_REFUTED, None, params, 0, seed)
    rng = random.Random(f"refute:{seed}")
    for t in range(trials):
        k = rng.randint(lo, hi)
        S = rng.sample(range(g.n), k)
        if violates(g, params, S, mode):
            return ExpansionVerdict(REFUTED, tuple(sorted(S)), params, t + 1, seed)
    return ExpansionVerdict(NOT_REFUTED, None, params, trials, seed)


# -- parameter transforms ----------------------------------------------------

def deletion_stability(params: ExpansionParams, eps: float) -> ExpansionParams:
    """Params after deleting at most eps*n vertices: (mu-e, nu-e, tau/(1-e))."""
    if eps < 0:
        raise ParamUnderflow(f"eps must be non-negative, got {eps}")
    if eps >= min(params.mu, params.nu):
        raise ParamUnderflow(
            f"eps={eps} >= min(mu, nu)={min(params.mu, params.nu)}"
        )
    if eps == 0:
        return params
    return ExpansionParams(
        mu=params.mu - eps,
        nu=params.nu - eps,
        tau=params.tau / (1 - eps),
        gamma=params.gamma,
    )


def degraded_after_deletion(params: ExpansionParams, removed: int, n: int) -> ExpansionParams:
    """Best-effort parameter degradation for pipeline-scale deletions.

    Uses the exact stability formula when removed/n is small enough for
    it; otherwise falls back to halving mu, nu (the shape the large-n
    argument arranges for) with tau stretched and capped below 1/2.  The
    result only steers layer-growth targets, so the fallback is a knob,
    not a claim.
    """
    if removed <= 0 or n <= 0:
        return params
    eps = removed / n
    if eps < min(params.mu, params.nu):
        out = deletion_stability(params, eps)
        if out.tau < 0.5 and out.tau >= max(out.mu, out.nu):
            return out
    mu = params.mu / 2
    nu = params.nu / 2
    tau = min(max(params.tau / max(1 - eps, 0.5), params.tau), 0.49)
    tau = max(tau, mu, nu)
    gamma = max(params.gamma * (1 - eps), 0.01)
    return ExpansionParams(mu=mu, nu=nu, tau=tau, gamma=gamma)


def dib_transform(nu: float, tau: float, gamma: float) -> tuple[float, float, float]:
    """Out-expansion to two-sided expansion: (nu, tau) -> (nu^2/2, nu^2/2, 2*tau).

    Hypotheses: gamma > 2*tau, tau*gamma > nu^2/2, nu < 1/2.
    """
    if not nu < 0.5:
        raise HypothesisViolated(f"need nu < 1/2, got nu={nu}")
    if not gamma > 2 * tau:
        raise HypothesisViolated(f"need gamma > 2*tau, got gamma={gamma}, tau={tau}")
    if not tau * gamma > nu * nu / 2:
        raise HypothesisViolated(
            f"need tau*gamma > nu^2/2, got {tau * gamma} <= {nu * nu / 2}"
        )
    half_nu_sq = nu * nu / 2
    return (half_nu_sq, half_nu_sq, 2 * tau)


def oriented_params(eps: float) -> tuple[float, float]:
    """Out-expansion parameters (eps^2/2, 2*eps) certified by the oriented
    degree condition delta + delta+ + delta- >= 3n/2 + 4*eps*n."""
    if not (0 < eps < 1):
        raise ParamInvalid(f"eps must be in (0,1), got {eps}")
    return (eps * eps / 2, 2 * eps)


def polyexp_threshold(k: float, a: float) -> float:
    """x0 such that e^x > a*x^k for all x >= x0; x0 = max(3k(log k+1)+3 log a, 0)."""
    if k <= 0 or a <= 0:
        raise ParamInvalid(f"need k, a > 0, got k={k}, a={a}")
    return max(3 * k * (math.log(k) + 1) + 3 * math.log(a), 0.0)


def log_linear_threshold(c: float, d: float) -> float:
    """x0 such that x > c*log(x) + d for all x > x0; x0 = 3c(log c+1)+3d."""
    if c <= 0 or d <= 0:
        raise ParamInvalid(f"need c, d > 0, got c={c}, d={d}")
    return 3 * c * (math.log(c) + 1) + 3 * d


def check_nash_williams(
    out_degs: Sequence[int], in_degs: Sequence[int], gamma: float
) -> bool:
    """Degree-sequence sufficient condition for the Hamilton wrapper.

    Both sequences ascending, 1-based index i ranges over i < n/2; the
    offset gamma*n rounds down.  Vacuously true for n = 0.
    """
    ok, _ = _nash_williams_detail(out_degs, in_degs, gamma)
    return ok


def _nash_williams_detail(
    out_degs: Sequence[int], in_degs: Sequence[int], gamma: float
) -> tuple[bool, int | None]:
    if len(out_degs) != len(in_degs):
        raise LengthMismatch(
            f"sequences have lengths {len(out_degs)} and {len(in_degs)}"
        )
    n = len(out_degs)
    for seq, name in ((out_degs, "out"), (in_degs, "in")):
        if any(seq[i] > seq[i + 1] for i in range(n - 1)):
            raise InputError(f"{name}-degree sequence not ascending")
    off = math.floor(gamma * n + _EPS)

    def bullet(first: Sequence[int], second: Sequence[int], i: int) -> bool:
        if first[i - 1] >= i + off:
            return True
        j = n - i - off  # 1-based index into the complementary sequence
        if 1 <= j <= n and second[j - 1] >= n - i:
            return True
        return False

    i = 1
    while i < n / 2:
        if not bullet(out_degs, in_degs, i) or not bullet(in_degs, out_degs, i):
            return False, i
        i += 1
    return True, None
