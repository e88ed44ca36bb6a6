"""qscore-bench command line.

Subcommands:
    gen       write one seeded G(n, p) instance as a graph file
    solve     run one solver on one graph file, print the run as JSON
    sweep     full Q-score sweep; writes report.json/.csv and plot data
    oracle    build a reference C_max table over the same seeded instances
    plotdata  re-emit the TSV plot files from a saved report.json

Exit status is nonzero only for configuration and I/O problems. A solver
producing no result is data (it scores as a random guess), not an error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, parse_config_file
from .graphs import GraphParseError, generate_er_graph, parse_graph, serialize_graph
from .protocol import build_oracle, run_sweep
from .reporting import plotdata_beta, plotdata_time, write_report
from .solvers import SOLVER_NAMES, make_solver, parse_param_overrides, solve

__all__ = ["main"]


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GraphParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qscore-bench", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"qscore-bench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded G(n, p) graph file")
    p.add_argument("-n", type=int, required=True, help="vertex count")
    p.add_argument("--p", type=float, default=0.5, help="edge probability (default 0.5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="run one solver on one graph file")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--solver", choices=SOLVER_NAMES, required=True)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--budget-ms", type=float, default=None, help="wall-clock budget (default 60000)")
    group.add_argument("--quota", type=int, default=None, help="deterministic iteration quota")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="run the full Q-score sweep")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="build a reference C_max table")
    p.add_argument("--sizes", required=True, help="comma-separated sizes, e.g. 8,12,16")
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--seed-base", type=int, default=1)
    p.add_argument("--solver", choices=SOLVER_NAMES + ("auto",), default="auto",
                   help="auto: exact up to n=24, simulated annealing above")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--budget-ms", type=float, default=None)
    group.add_argument("--quota", type=int, default=None)
    p.add_argument("--out", type=Path, required=True, help="oracle table JSON path")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("plotdata", help="re-emit plot TSVs from a saved report")
    p.add_argument("--report", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="directory for the TSV files")
    p.set_defaults(func=_cmd_plotdata)

    return parser


def _cmd_gen(args) -> int:
    g = generate_er_graph(args.n, args.p, args.seed)
    text = serialize_graph(g)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        print(f"wrote {g.n} vertices, {g.num_edges} edges to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    if not args.graph.exists():
        print(f"error: graph file not found: {args.graph}", file=sys.stderr)
        return 1
    g = parse_graph(args.graph.read_text(encoding="utf-8"))
    solver = make_solver(args.solver, parse_param_overrides(args.param))
    budget = _budget_from_args(args.budget_ms, args.quota, args.seed)
    run = solve(solver, g, budget)
    print(json.dumps(run.to_dict(), indent=2))
    return 0


def _budget_from_args(budget_ms, quota, seed):
    from .solvers import SolverBudget

    if quota is not None:
        return SolverBudget.deterministic(quota, seed=seed)
    return SolverBudget.wall_clock(budget_ms if budget_ms is not None else 60_000.0, seed=seed)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None, help="key=value config file")
    p.add_argument("--solver", choices=SOLVER_NAMES, default=None)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--start", type=int, default=None)
    p.add_argument("--step", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--m", type=int, default=None, help="instances per size")
    p.add_argument("--beta-star", type=float, default=None)
    p.add_argument("--cmax-mode", choices=("approximation", "oracle"), default=None)
    p.add_argument("--oracle-table", default=None)
    p.add_argument("--baseline", choices=("n2_over_8", "exact"), default=None)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--budget-ms", type=float, default=None)
    group.add_argument("--quota", type=int, default=None)
    p.add_argument("--seed-base", type=int, default=None)
    p.add_argument("--time-cap-ms", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)


def _config_from_args(args) -> RunConfig:
    config = parse_config_file(args.config) if args.config else RunConfig()
    overrides = {
        "solver": args.solver,
        "start": args.start,
        "step": args.step,
        "max_n": args.max_n,
        "m": args.m,
        "beta_star": args.beta_star,
        "cmax_mode": args.cmax_mode,
        "oracle_table": args.oracle_table,
        "baseline": args.baseline,
        "seed_base": args.seed_base,
        "time_cap_ms": args.time_cap_ms,
        "workers": args.workers,
        "out": args.out,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if args.quota is not None:
        config.quota, config.budget_ms = args.quota, None
    elif args.budget_ms is not None:
        config.budget_ms, config.quota = args.budget_ms, None
    config.solver_params.update(parse_param_overrides(args.param))
    return config.validate()


def _cmd_sweep(args) -> int:
    config = _config_from_args(args)
    solver = config.build_solver()
    oracle = config.load_oracle()

    def progress(record):
        print(
            f"n={record.n}: beta={record.beta:.4f} +/- {record.beta_stderr:.4f}  "
            f"mean_cut={record.mean_cut:.1f}  mean_time={record.mean_time_ms:.0f} ms  "
            f"no_result={record.no_result_count}"
        )

    report = run_sweep(
        solver,
        config.schedule(),
        config.beta_params(),
        config.budget(),
        config.seed_base,
        oracle=oracle,
        workers=config.workers,
        mean_time_cap_ms=config.time_cap_ms,
        solver_name=config.solver,
        progress=progress,
    )
    run_dir = write_report(report, config.out)
    print(f"Q-score: {report.qscore_label}  (stop reason: {report.stop_reason})")
    print(f"report written to {run_dir}")
    return 0


def _cmd_oracle(args) -> int:
    try:
        sizes = sorted({int(tok) for tok in args.sizes.split(",") if tok.strip()})
    except ValueError:
        raise ConfigError(f"bad --sizes value: {args.sizes!r}") from None
    if not sizes:
        raise ConfigError("at least one size is required")
    from .protocol import BetaParams

    params = BetaParams(m_instances=args.m)
    budget = _budget_from_args(args.budget_ms, args.quota, args.seed_base)
    solver = None
    if args.solver != "auto":
        solver = make_solver(args.solver, parse_param_overrides(args.param))
    table = build_oracle(sizes, params, budget, args.seed_base, solver=solver)
    table.save(args.out)
    print(f"oracle table for n in {sizes} written to {args.out}")
    return 0


def _cmd_plotdata(args) -> int:
    if not args.report.exists():
        print(f"error: report not found: {args.report}", file=sys.stderr)
        return 1
    report = json.loads(args.report.read_text(encoding="utf-8"))
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "beta_vs_n.tsv").write_text(plotdata_beta(report), encoding="utf-8")
    (args.out / "time_vs_n.tsv").write_text(plotdata_time(report), encoding="utf-8")
    print(f"plot data written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
