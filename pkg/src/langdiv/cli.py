"""``langdiv`` command line: simulate, sweep, metrics, empirical.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  Outputs are written
only after all inputs and flags have been validated.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import empirical as emp
from .dynamics import STRATEGIES, ModelConfig, run
from .experiments import (
    aggregate,
    aggregate_csv,
    default_workers,
    load_plan,
    realizations_csv,
    sweep_realizations,
)
from .graph import Graph, ParameterError, format_edge_list, read_edge_list
from .metrics import METRICS_COLUMNS, compute_metrics


class CliError(Exception):
    """Runtime failure reported with exit code 1."""


def format_manifest(cfg: ModelConfig, stop_reason: str, steps: int) -> str:
    items = dict(cfg.manifest(), stop_reason=stop_reason, steps_executed=steps)
    return "".join(f"{k}={v}\n" for k, v in items.items())


def format_states(states: np.ndarray) -> str:
    f = states.shape[1]
    lines = ["node," + ",".join(f"trait{t + 1}" for t in range(f))]
    lines += [f"{i}," + ",".join(map(str, row)) for i, row in enumerate(states.tolist())]
    return "\n".join(lines) + "\n"


def read_states(path: Path) -> np.ndarray:
    rows = {}
    width = None
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("node"):
            continue
        try:
            vals = [int(x) for x in line.split(",")]
        except ValueError:
            raise CliError(f"{path}:{lineno}: non-integer field") from None
        if width is None:
            width = len(vals)
        if len(vals) != width or width < 2:
            raise CliError(f"{path}:{lineno}: expected {width} fields")
        if vals[0] in rows:
            raise CliError(f"{path}:{lineno}: node {vals[0]} listed twice")
        rows[vals[0]] = vals[1:]
    if not rows:
        raise CliError(f"{path}: no state rows")
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise CliError(f"{path}: node ids must be exactly 0..{n - 1}")
    return np.array([rows[i] for i in range(n)], dtype=np.int64)


def _write_all(files: dict[Path, str]) -> None:
    for path, text in files.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def cmd_simulate(args, parser) -> int:
    if args.seed is None:
        parser.error("--seed is required (all randomness flows from it)")
    try:
        cfg = ModelConfig(n=args.n, avg_degree=args.k, f=args.f, q=args.q, strategy=args.strategy,
                          seed=args.seed, max_steps=args.max_steps,
                          quiescence_window=args.quiescence_window)
    except ParameterError as exc:
        parser.error(str(exc))
    res = run(cfg)
    report = compute_metrics(res.graph, res.states, res.stop_reason, res.steps)
    out, pre = Path(args.out), args.prefix
    _write_all({
        out / f"{pre}manifest.txt": format_manifest(cfg, res.stop_reason, res.steps),
        out / f"{pre}edges.txt": format_edge_list(res.graph),
        out / f"{pre}states.csv": format_states(res.states),
        out / f"{pre}metrics.csv": ",".join(METRICS_COLUMNS) + "\n" + report.csv_row() + "\n",
    })
    print(f"{res.stop_reason} after {res.steps} steps: {report.domains} domains, "
          f"{report.components} components", file=sys.stderr)
    return 0


def cmd_sweep(args, parser) -> int:
    try:
        plan = load_plan(args.plan)
    except OSError as exc:
        parser.error(f"cannot read plan: {exc}")
    except ParameterError as exc:
        parser.error(f"invalid plan: {exc}")
    if args.workers is not None and args.workers < 1:
        parser.error("--workers must be >= 1")
    workers = args.workers or default_workers()
    records = sweep_realizations(plan, workers)
    rows = [r.row() for r in records]
    out = Path(args.out)
    _write_all({
        out / "realizations.csv": realizations_csv(records),
        out / "aggregate.csv": aggregate_csv(aggregate(rows)),
    })
    return 0


def cmd_metrics(args, parser) -> int:
    for p in (args.edges, args.states):
        if not Path(p).is_file():
            parser.error(f"no such file: {p}")
    states = read_states(Path(args.states))
    try:
        edges = read_edge_list(args.edges)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    n = states.shape[0]
    bad = [(u, v) for u, v in edges if u >= n or v >= n]
    if bad:
        raise CliError(f"edge {bad[0]} references a node outside the {n} nodes in {args.states}")
    try:
        g = Graph(n, edges)
    except ValueError as exc:
        raise CliError(f"{args.edges}: {exc}") from None
    report = compute_metrics(g, states)
    if args.header:
        print(",".join(METRICS_COLUMNS))
    print(report.csv_row())
    return 0


def cmd_empirical(args, parser) -> int:
    if not Path(args.input).is_file():
        parser.error(f"no such input file: {args.input}")
    if args.exclude_file is not None and not Path(args.exclude_file).is_file():
        parser.error(f"no such exclude file: {args.exclude_file}")
    if (args.bin_width is None) == (args.log_base is None):
        parser.error("give exactly one of --bin-width or --log-base")
    if args.bin_width is not None and args.bin_width <= 0:
        parser.error("--bin-width must be positive")
    if args.log_base is not None and args.log_base < 2:
        parser.error("--log-base must be >= 2")
    try:
        records = emp.load_countries(args.input)
    except emp.CountryDataError as exc:
        raise CliError(str(exc)) from None
    kept = emp.exclude(records, emp.load_exclusions(args.exclude_file))
    bins = emp.bin_average(kept, bin_width=args.bin_width, log_base=args.log_base)
    _write_all({
        Path(f"{args.out_prefix}scatter.csv"): emp.scatter_csv(kept),
        Path(f"{args.out_prefix}bins.csv"): emp.bins_csv(bins),
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="langdiv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one realization and dump its final state")
    p.add_argument("--n", type=int, required=True, help="number of agents")
    p.add_argument("--k", type=float, default=4.0, help="average degree (ignored for static-lattice)")
    p.add_argument("--f", type=int, default=3, help="traits per agent")
    p.add_argument("--q", type=int, required=True, help="values per trait")
    p.add_argument("--strategy", choices=STRATEGIES, default="local-uniform")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--quiescence-window", type=int)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--prefix", default="", help="file name prefix")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a parameter sweep from a plan file")
    p.add_argument("--plan", required=True)
    p.add_argument("--workers", type=int, help="worker processes (default: available cores)")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("metrics", help="metrics row for an edge list and states dump")
    p.add_argument("--edges", required=True)
    p.add_argument("--states", required=True)
    p.add_argument("--header", action="store_true", help="print the column header first")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("empirical", help="scatter and binned averages of country data")
    p.add_argument("--input", required=True)
    p.add_argument("--bin-width", type=float)
    p.add_argument("--log-base", type=int)
    p.add_argument("--exclude-file", help="one country per line (default: shipped list)")
    p.add_argument("--out-prefix", default="")
    p.set_defaults(func=cmd_empirical)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except CliError as exc:
        print(f"langdiv {args.command}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure, not a usage problem
        print(f"langdiv {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
