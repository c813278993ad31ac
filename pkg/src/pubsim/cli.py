"""Command-line entry point: ``plan``, ``run``, ``sweep`` and ``report``.

Exit codes: 0 on success, 1 when some sweep replications failed, 2 for
configuration or usage errors, 3 for I/O failures while writing results.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from pubsim.config import SimConfig, normalize_scenario
from pubsim.engine import run as run_simulation
from pubsim.errors import ConfigurationError
from pubsim.metrics import build_report, dumps_report, load_ledger, render_text, write_outputs
from pubsim.planner import PlannerParams, optimal_plan

log = logging.getLogger("pubsim")

EXIT_OK = 0
EXIT_RUN_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3

# default plan curves: r varies at beta=0.9, then beta varies at r=2
DEFAULT_PLAN_GRID = [(r, 0.9) for r in (1.5, 2.0, 3.0)] + [(2.0, b) for b in (0.7, 0.9, 1.0)]
DEFAULT_MAX_N = 8

# scalar columns copied from each run's report into the sweep aggregate
AGGREGATE_METRICS = {
    "written_papers": ("counts", "written_papers"),
    "publications": ("counts", "publications_total"),
    "all_acceptance_share": ("ratios", "all_acceptance_share_of_publications"),
    "reviews_per_publication": ("ratios", "reviews_per_publication"),
    "invitations_per_publication": ("ratios", "invitations_per_publication"),
    "reviewer_acceptance_rate": ("ratios", "reviewer_acceptance_rate"),
    "mean_delay": ("published_papers", "delay_days", "all", "mean"),
    "median_delay": ("published_papers", "delay_days", "all", "median"),
    "mean_attempts": ("published_papers", "attempts", "all", "mean"),
    "mean_quality_fit": ("published_papers", "quality_fit", "all", "mean"),
    "mean_utility": ("published_papers", "utility", "all", "mean"),
    "mean_discounted_utility": ("published_papers", "discounted_utility", "all", "mean"),
    "mean_journal_change_pct": ("journal_quality", "change_pct", "mean"),
}


class CliIOError(Exception):
    """Raised when results cannot be written or read back."""


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def load_config(path: str | None, scenario: str | None = None, seed: int | None = None,
                overrides: Sequence[str] = ()) -> SimConfig:
    """Build a config from an optional JSON file plus command-line overrides.

    Any failure to read or parse the file is a configuration error.
    """
    if path is None:
        cfg = SimConfig()
    else:
        try:
            cfg = SimConfig.from_json(path)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc.strerror or exc}") from None
    extra: dict[str, Any] = {}
    if scenario is not None:
        extra["scenario"] = normalize_scenario(scenario)
    if seed is not None:
        extra["seed"] = seed
    if extra:
        cfg = cfg.with_overrides(extra)
    if overrides:
        cfg = cfg.with_overrides(list(overrides))
    return cfg


def _dig(report: dict[str, Any], path: tuple[str, ...]) -> Any:
    node: Any = report
    for key in path:
        if node is None:
            return None
        node = node.get(key)
    return node


def _parse_grid(items: Sequence[str]) -> list[tuple[str, list[Any]]]:
    grid = []
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key or not raw:
            raise ConfigurationError(f"grid entries must look like key=v1,v2,...; got {item!r}")
        values = []
        for token in raw.split(","):
            try:
                values.append(json.loads(token))
            except json.JSONDecodeError:
                values.append(token)
        grid.append((key.strip(), values))
    return grid


def _seed_arg(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


# ---------------------------------------------------------------------------
# plan
# ---------------------------------------------------------------------------


def plan_rows(pairs: Sequence[tuple[float, float]], horizons: Sequence[int]) -> list[dict[str, Any]]:
    rows = []
    for r, beta in pairs:
        for n in horizons:
            plan = optimal_plan(PlannerParams(r, beta, n))
            for i, (p, v) in enumerate(zip(plan.probs, plan.values), start=1):
                rows.append({"r": r, "beta": beta, "n": n, "i": i, "p": p, "value": v})
    return rows


def cmd_plan(args: argparse.Namespace) -> int:
    if args.r is None and args.beta is None:
        pairs = list(dict.fromkeys(DEFAULT_PLAN_GRID))  # (2, 0.9) belongs to both families
    else:
        pairs = list(itertools.product(args.r or [2.0], args.beta or [0.9]))
    horizons = args.n if args.n else list(range(1, DEFAULT_MAX_N + 1))
    rows = plan_rows(pairs, horizons)
    fields = ["r", "beta", "n", "i", "p", "value"]
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                _write_csv(fh, fields, rows)
        except OSError as exc:
            raise CliIOError(f"cannot write {args.out}: {exc}") from None
    else:
        _write_csv(sys.stdout, fields, rows)
    return EXIT_OK


def _write_csv(fh, fields: list[str], rows: list[dict[str, Any]]) -> None:
    w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def execute(cfg: SimConfig, out_dir: str | Path) -> dict[str, Any]:
    """Run one replication, persist its outputs and return the report."""
    ledger = run_simulation(cfg)
    report = build_report(ledger, cfg.to_dict())
    try:
        write_outputs(ledger, report, out_dir)
    except OSError as exc:
        raise CliIOError(f"cannot write results to {out_dir}: {exc}") from None
    return report


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args.scenario, args.seed, args.set)
    out = args.out or f"results/{cfg.scenario}-seed{cfg.seed}"
    report = execute(cfg, out)
    print(render_text(report))
    print(f"results written to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_job(job: tuple[int, dict[str, Any], dict[str, Any], str]) -> dict[str, Any]:
    index, base, params, out_dir = job
    row: dict[str, Any] = {"run": index, **params}
    try:
        cfg = SimConfig.from_dict(base).with_overrides(params)
        row["scenario"], row["seed"] = cfg.scenario, cfg.seed
        report = execute(cfg, out_dir)
        row.update({name: _dig(report, path) for name, path in AGGREGATE_METRICS.items()})
        row["status"], row["error"] = "ok", ""
    except Exception as exc:  # recorded per row; the sweep carries on
        row["status"], row["error"] = "failed", f"{type(exc).__name__}: {exc}"
    return row


def sweep_jobs(base: SimConfig, grid: list[tuple[str, list[Any]]], seeds: Sequence[int],
               out_root: Path) -> list[tuple[int, dict[str, Any], dict[str, Any], str]]:
    keys = [k for k, _ in grid]
    jobs = []
    for index, (combo, seed) in enumerate(itertools.product(itertools.product(*(v for _, v in grid)), seeds)):
        params = dict(zip(keys, combo))
        params["seed"] = seed
        jobs.append((index, base.to_dict(), params, str(out_root / f"run-{index:04d}")))
    return jobs


def cmd_sweep(args: argparse.Namespace) -> int:
    base = load_config(args.config, args.scenario, None, args.set)
    grid = _parse_grid(args.grid)
    keys = [k for k, _ in grid]
    if "seed" in keys:
        raise ConfigurationError("use --seeds rather than a seed grid")
    # validate every grid point up front so typos fail before any work starts
    for combo in itertools.product(*(v for _, v in grid)):
        base.with_overrides(dict(zip(keys, combo)))
    seeds = args.seeds if args.seeds else [base.seed]
    out_root = Path(args.out)
    jobs = sweep_jobs(base, grid, seeds, out_root)
    workers = max(1, args.workers or os.cpu_count() or 1)
    log.info("sweep: %d runs on %d worker(s)", len(jobs), workers)
    if workers == 1 or len(jobs) == 1:
        rows = [_sweep_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_job, jobs))

    fields = ["run", *keys, "scenario", "seed", "status", "error", *AGGREGATE_METRICS]
    try:
        out_root.mkdir(parents=True, exist_ok=True)
        with open(out_root / "aggregate.csv", "w", encoding="utf-8", newline="") as fh:
            _write_csv(fh, fields, rows)
    except OSError as exc:
        raise CliIOError(f"cannot write aggregate to {out_root}: {exc}") from None
    failed = [r for r in rows if r["status"] != "ok"]
    print(f"{len(rows) - len(failed)}/{len(rows)} runs succeeded; aggregate at {out_root / 'aggregate.csv'}")
    for r in failed:
        print(f"run {r['run']} failed: {r['error']}", file=sys.stderr)
    return EXIT_RUN_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def regenerate(out_dir: str | Path) -> dict[str, Any]:
    try:
        ledger, config = load_ledger(out_dir)
    except (OSError, KeyError, ValueError) as exc:
        raise CliIOError(f"cannot load results from {out_dir}: {exc}") from None
    return build_report(ledger, config)


def cmd_report(args: argparse.Namespace) -> int:
    report = regenerate(args.dir)
    if args.json:
        sys.stdout.write(dumps_report(report))
    else:
        print(render_text(report))
    if args.check:
        stored = (Path(args.dir) / "summary.json").read_text(encoding="utf-8")
        if stored != dumps_report(report):
            print("regenerated summary differs from the stored summary.json", file=sys.stderr)
            return EXIT_RUN_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pubsim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="print optimal submission plans as CSV")
    p.add_argument("--r", type=float, nargs="+", help="risk-aversion values")
    p.add_argument("--beta", type=float, nargs="+", help="discount factors")
    p.add_argument("--n", type=int, nargs="+", help="horizons (default 1..8)")
    p.add_argument("--out", help="CSV file (default: standard output)")
    p.set_defaults(func=cmd_plan)

    def sim_options(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--config", help="JSON config file (default: built-in full-scale settings)")
        sp.add_argument("--scenario", help="status-quo or daa")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config field; repeatable")

    p = sub.add_parser("run", help="simulate one scenario and write its outputs")
    sim_options(p)
    p.add_argument("--seed", type=_seed_arg)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a parameter grid over several seeds")
    sim_options(p)
    p.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2",
                   help="grid axis; repeatable")
    p.add_argument("--seeds", type=_seed_arg, nargs="+")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", required=True, help="directory for per-run outputs and aggregate.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="rebuild the summary from a results directory")
    p.add_argument("dir")
    p.add_argument("--json", action="store_true", help="print summary.json instead of tables")
    p.add_argument("--check", action="store_true", help="fail if the stored summary.json differs")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CliIOError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
