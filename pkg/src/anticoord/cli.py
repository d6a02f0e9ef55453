"""Command-line front end.

Subcommands:
  simulate      run the (optionally controlled) dynamics, emit a JSONL trajectory
  solve         compute a control policy for a graph file and report its cost
  sweep         Monte-Carlo experiments over random graphs, emit CSV
  bench-verify  replay the benchmark proposition table and print a pass/fail matrix
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from anticoord import exact, vertex_cover
from anticoord.benchmarks import verify_propositions
from anticoord.experiments import ExperimentConfig, run_experiment
from anticoord.game_core import ActionProfile, PayoffConstants, TypedBipartiteGraph
from anticoord.greedy import Variant, control_effort, run_greedy
from anticoord.learning import controlled_run, run
from anticoord.policies import (
    cost_dynamic,
    cost_static,
    policy_from_dict,
    validate_dynamic,
    validate_static,
)


def _add_game_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", required=True, help="graph JSON file")
    parser.add_argument("--c0", required=True, help="type-0 constant (decimal or fraction)")
    parser.add_argument("--c1", required=True, help="type-1 constant (decimal or fraction)")


def _load_game(args) -> tuple[TypedBipartiteGraph, PayoffConstants]:
    graph = TypedBipartiteGraph.from_json_file(args.graph)
    return graph, PayoffConstants(Fraction(args.c0), Fraction(args.c1))


def _cmd_simulate(args) -> int:
    graph, constants = _load_game(args)
    horizon = args.horizon or graph.n
    if args.policy:
        with open(args.policy) as fh:
            policy = policy_from_dict(json.load(fh))
        traj = controlled_run(
            graph, constants, ActionProfile.all_undecided(graph.n), policy, horizon
        )
    else:
        traj = run(graph, constants, horizon=horizon)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        traj.write_jsonl(out)
    finally:
        if args.out:
            out.close()
    print(f"converged at t={traj.convergence_time}" if traj.convergence_time is not None
          else "no convergence within horizon", file=sys.stderr)
    return 0


def _cmd_solve(args) -> int:
    graph, constants = _load_game(args)
    report: dict
    if args.method == "exact":
        policy, cost = exact.brute_static(graph, constants)
        check = validate_static(graph, constants, policy)
        report = {"method": "exact", "cost": cost, "policy": policy.to_dict(),
                  "feasible": check.feasible}
    elif args.method == "exact-dyn":
        policy, cost = exact.brute_dynamic_restricted(graph, constants)
        check = validate_dynamic(graph, constants, policy)
        report = {"method": "exact-dyn", "cost": str(cost), "policy": policy.to_dict(),
                  "feasible": check.feasible,
                  "note": "optimal within the two-phase policy class (upper bound in general)"}
    elif args.method == "vc":
        solution = vertex_cover.solve(graph, constants)
        check = validate_dynamic(graph, constants, solution.policy)
        report = {
            "method": "vc",
            "cover": sorted(solution.cover),
            "rho_positive": sorted(solution.rho_positive),
            "policy": solution.policy.to_dict(),
            "cost": str(cost_dynamic(solution.policy, graph.n)),
            "feasible": check.feasible,
        }
    else:
        result = run_greedy(
            graph, constants, Variant(args.method),
            rng_seed=args.seed, deterministic=args.deterministic or None,
        )
        static_check = validate_static(graph, constants, result.static_policy)
        dynamic_check = validate_dynamic(graph, constants, result.dynamic_policy)
        report = {
            "method": args.method,
            "selected": result.controlled,
            "forced": {str(i): int(v) for i, v in sorted(result.forced.items())},
            "effort": str(control_effort(result, graph.n)),
            "static_policy": result.static_policy.to_dict(),
            "static_cost": cost_static(result.static_policy),
            "static_feasible": static_check.feasible,
            "dynamic_policy": result.dynamic_policy.to_dict(),
            "dynamic_cost": str(cost_dynamic(result.dynamic_policy, graph.n)),
            "dynamic_feasible": dynamic_check.feasible,
        }
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _parse_cells(spec: str) -> tuple:
    cells = []
    for chunk in spec.split(";"):
        m0, m1 = chunk.split(",")
        cells.append((int(m0), int(m1)))
    return tuple(cells)


def _cmd_sweep(args) -> int:
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        if args.out:
            data["out"] = args.out
        if args.workers is not None:
            data["workers"] = args.workers
        path = run_experiment(ExperimentConfig.from_dict(data))
        print(f"wrote {path}")
        return 0
    if not args.out:
        raise SystemExit("sweep needs --out (or a --config file with an 'out' entry)")
    variants = tuple(Variant(v) for v in args.variants.split(","))
    workers = args.workers if args.workers is not None else 1
    if args.mode == "size_sweep":
        sizes = tuple(int(s) for s in args.sizes.split(","))
        config = ExperimentConfig(
            mode="size_sweep", variants=variants, reps=args.reps, seed=args.seed,
            out=args.out, sizes=sizes, expected_degree=args.expected_degree,
            c0=Fraction(args.c0), c1=Fraction(args.c1), workers=workers,
            deterministic=args.deterministic,
        )
    elif args.mode == "grid":
        config = ExperimentConfig(
            mode="grid", variants=variants, reps=args.reps, seed=args.seed,
            out=args.out, n=args.n, p_b=args.p, grid_m_max=args.grid_max,
            m_cells=_parse_cells(args.cells) if args.cells else (),
            workers=workers, deterministic=args.deterministic,
        )
    else:
        config = ExperimentConfig(
            mode="single", variants=variants, reps=args.reps, seed=args.seed,
            out=args.out, n=args.n, p_b=args.p,
            c0=Fraction(args.c0), c1=Fraction(args.c1), workers=workers,
            deterministic=args.deterministic,
        )
    path = run_experiment(config)
    print(f"wrote {path}")
    return 0


def _cmd_bench_verify(args) -> int:
    entries = None
    if args.max_n is not None:
        from anticoord.benchmarks import proposition_table

        entries = [e for e in proposition_table() if e[2] <= args.max_n]
    rows = verify_propositions(entries)
    failures = 0
    for row in rows:
        status = "PASS" if row["ok"] else "FAIL"
        if not row["ok"]:
            failures += 1
        print(
            f"{status} {row['kind']:<4} case {row['case']} n={row['n']:<2} "
            f"static {row['static_cost']} (brute {row['brute_static_cost']}) "
            f"dynamic {row['dynamic_cost']} (brute {row['brute_dynamic_cost']})"
        )
    print(f"{len(rows) - failures}/{len(rows)} entries verified")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anticoord")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run the learning dynamics")
    _add_game_args(p_sim)
    p_sim.add_argument("--policy", help="optional policy JSON file to apply")
    p_sim.add_argument("--horizon", type=int, default=None)
    p_sim.add_argument("--out", help="output JSONL path (default stdout)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_solve = sub.add_parser("solve", help="compute a control policy")
    _add_game_args(p_solve)
    p_solve.add_argument(
        "--method",
        required=True,
        choices=["exact", "exact-dyn", "vc", "cp", "cp2", "maxdeg", "rand"],
    )
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.add_argument("--deterministic", action="store_true")
    p_solve.add_argument("--out", help="output JSON path (default stdout)")
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="Monte-Carlo experiment harness")
    p_sweep.add_argument("--config", help="JSON file with the experiment configuration")
    p_sweep.add_argument("--mode", choices=["grid", "size_sweep", "single"], default="grid")
    p_sweep.add_argument("--variants", default="cp,maxdeg,rand")
    p_sweep.add_argument("--reps", type=int, default=100)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--out")
    p_sweep.add_argument("--n", type=int, default=20)
    p_sweep.add_argument("--p", type=float, default=0.3)
    p_sweep.add_argument("--grid-max", type=int, default=10, dest="grid_max")
    p_sweep.add_argument("--cells", help="restrict grid cells, e.g. '1,10;10,10'")
    p_sweep.add_argument("--sizes", default="10,15,20,25,30,35,40,45,50,55,60,65,70")
    p_sweep.add_argument("--expected-degree", type=int, default=6, dest="expected_degree")
    p_sweep.add_argument("--c0", default="2")
    p_sweep.add_argument("--c1", default="2")
    p_sweep.add_argument("--deterministic", action="store_true",
                         help="lowest-index tie-breaks instead of the seeded rng")
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_bench = sub.add_parser("bench-verify", help="verify the benchmark proposition table")
    p_bench.add_argument("--out", help="optional JSON report path")
    p_bench.add_argument("--max-n", type=int, default=None, dest="max_n",
                         help="restrict to table entries with at most this many players")
    p_bench.set_defaults(func=_cmd_bench_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
