"""Command-line surface: gen | certify | hamilton | factor | absorber | bench.

Exit codes: 0 success, 2 structured stage failure (the construction ran
but could not produce the object), 3 precondition or parse error.  All
JSON output is canonical (sorted keys, no whitespace) so identical
inputs and seeds give byte-identical documents.
"""
from __future__ import annotations

import argparse
import json
import sys

from .absorber import build_absorber
from .bench import run_grid, to_csv
from .digraph import Digraph, load_edge_list, save_edge_list, verify_cycle
from .errors import InputError, RobhamError, SearchError
from .expansion import (
    CERTIFIED,
    NOT_REFUTED,
    ExpansionParams,
    certify_exhaustive,
    refute_sampling,
)
from .factor import find_factor, reduce_cycles
from .generate import GeneratorSpec, generate
from .pipeline import PipelineConfig, StageCaps, find_cycle_through

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_BAD_INPUT = 3


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _params_from_args(args, g: Digraph) -> ExpansionParams:
    gamma = args.gamma
    if gamma is None:
        gamma = g.min_semi_degree() / g.n if g.n else 0.5
        gamma = min(max(gamma, 0.01), 0.99)
    return ExpansionParams(mu=args.mu, nu=args.nu, tau=args.tau, gamma=gamma)


def _add_param_flags(sub, tau_default=0.1):
    sub.add_argument("--mu", type=float, default=0.1)
    sub.add_argument("--nu", type=float, default=0.1)
    sub.add_argument("--tau", type=float, default=tau_default)
    sub.add_argument("--gamma", type=float, default=None,
                     help="defaults to the measured min semi-degree / n")


def cmd_gen(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind, n=args.n, p=args.p, part_size=args.part_size, seed=args.seed
    )
    g = generate(spec)
    save_edge_list(g, args.out)
    if args.json:
        print(_dump({"kind": args.kind, "n": g.n, "m": g.m, "out": args.out}))
    else:
        print(f"wrote {args.out}: n={g.n} m={g.m}")
    return EXIT_OK


def cmd_certify(args) -> int:
    g = load_edge_list(args.graph)
    params = _params_from_args(args, g)
    method = args.method
    if method == "auto":
        method = "exhaustive" if g.n <= args.cap else "sample"
    if method == "exhaustive":
        verdict = certify_exhaustive(g, params, mode=args.mode, cap=args.cap)
    else:
        verdict = refute_sampling(g, params, args.trials, args.seed, mode=args.mode)
    print(_dump(verdict.to_json_dict()))
    return EXIT_OK if verdict.status in (CERTIFIED, NOT_REFUTED) else EXIT_FAILED


def cmd_hamilton(args) -> int:
    g = load_edge_list(args.graph)
    params = _params_from_args(args, g)
    ell = args.length if args.length is not None else g.n
    v = args.through if args.through is not None else 0
    cfg = PipelineConfig(params=params, seed=args.seed, caps=StageCaps(retries=args.retries))
    try:
        cycle, report = find_cycle_through(g, ell, v, cfg)
    except SearchError as exc:
        doc = {"error": str(exc), "stage": getattr(exc, "stage", type(exc).__name__)}
        print(_dump(doc))
        return EXIT_FAILED
    assert verify_cycle(g, cycle, ell, v)
    if args.json:
        print(report.to_json())
    else:
        print(" ".join(str(x) for x in cycle))
    return EXIT_OK


def cmd_factor(args) -> int:
    g = load_edge_list(args.graph)
    try:
        factor = find_factor(g)
    except SearchError as exc:
        print(_dump({"error": str(exc)}))
        return EXIT_FAILED
    if args.xi is not None:
        result = reduce_cycles(g, factor, args.xi)
        factor = result.factor
    print(_dump([list(c) for c in factor.cycles]))
    return EXIT_OK


def cmd_absorber(args) -> int:
    g = load_edge_list(args.graph)
    params = _params_from_args(args, g)
    targets = None if args.verify_cover else ()
    try:
        absorber = build_absorber(
            g, args.d, params, args.m, seed=args.seed, cover_targets=targets
        )
    except SearchError as exc:
        print(_dump({"error": str(exc)}))
        return EXIT_FAILED
    doc = {
        "cover": [list(p) for p in absorber.cover.pairs],
        "ladders": [
            {
                "q": list(lad.q.vertices),
                "connectors": [list(c) for c in lad.connectors],
            }
            for lad in absorber.ladders
        ],
        "cycle": list(absorber.cycle),
    }
    print(_dump(doc))
    return EXIT_OK


def cmd_bench(args) -> int:
    n_list = [int(x) for x in args.n_list.split(",") if x]
    p_list = [float(x) for x in args.p_list.split(",") if x]
    rows = run_grid(n_list, p_list, args.trials, args.seed)
    csv = to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv)
        print(f"wrote {args.out}: {len(rows)} rows")
    else:
        sys.stdout.write(csv)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="robham",
        description="Hamilton cycles in robustly expanding digraphs",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("--kind", choices=["random_dnp", "blowup_c5", "oriented_random", "complete"],
                   required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--part-size", dest="part_size", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", help="certify or refute robust expansion")
    p.add_argument("graph")
    _add_param_flags(p)
    p.add_argument("--mode", choices=["out", "in", "both"], default="both")
    p.add_argument("--method", choices=["auto", "exhaustive", "sample"], default="auto")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("hamilton", help="find a cycle of prescribed length through a vertex")
    p.add_argument("graph")
    _add_param_flags(p)
    p.add_argument("--length", type=int, default=None, help="defaults to n (Hamilton)")
    p.add_argument("--through", type=int, default=None, help="defaults to vertex 0")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hamilton)

    p = sub.add_parser("factor", help="1-factor (optionally with cycle merging)")
    p.add_argument("graph")
    p.add_argument("--xi", type=float, default=None,
                   help="merge cycles shorter than xi*n/2")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("absorber", help="build a d-absorber and print it as JSON")
    p.add_argument("graph")
    _add_param_flags(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify-cover", action="store_true",
                   help="require the cover to d-cover all of V (full-scale semantics)")
    p.set_defaults(func=cmd_absorber)

    p = sub.add_parser("bench", help="success-rate grid over (n, p)")
    p.add_argument("--n-list", dest="n_list", required=True)
    p.add_argument("--p-list", dest="p_list", required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InputError, OSError) as exc:
        print(_dump({"error": str(exc)}), file=sys.stderr)
        return EXIT_BAD_INPUT
    except RobhamError as exc:
        print(_dump({"error": str(exc)}), file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
