"""Command line entry point: ``sampler run`` and ``sampler report``."""

from __future__ import annotations

import argparse
import logging
import sys

from .diagnostics import SUMMARY_COLUMNS
from .experiments import (
    EXPERIMENT_KERNELS,
    PRESETS,
    build_config,
    load_config_file,
    report,
    run_experiment,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sampler", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and write traces, tables, manifest")
    run.add_argument("--config", help="TOML config file")
    run.add_argument("--experiment", choices=sorted(EXPERIMENT_KERNELS))
    run.add_argument("--kernel")
    run.add_argument("--n", dest="n_iter", type=int, help="iterations per chain")
    run.add_argument("--reps", dest="n_replications", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", dest="output_dir")
    run.add_argument("--preset", choices=sorted(PRESETS))
    run.add_argument("--tuning", type=float, help="fixed proposal scale (skips auto-tuning)")
    run.add_argument("--burn-in", dest="burn_in", type=int)
    run.add_argument("--thin", type=int)
    run.add_argument("--workers", type=int)

    rep = sub.add_parser("report", help="rebuild the summary table from stored traces")
    rep.add_argument("manifest")
    rep.add_argument("--csv", help="also write the rebuilt table here")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "run":
        file_values = load_config_file(args.config) if args.config else {}
        overrides = {k: v for k, v in vars(args).items()
                     if k not in ("command", "config", "verbose")}
        try:
            cfg = build_config(file_values, **overrides)
        except (TypeError, ValueError) as err:
            print(f"sampler: config error: {err}", file=sys.stderr)
            return 2
        manifest = run_experiment(cfg)
        failed = [r for r in manifest.replications if r["status"] != "ok"]
        print(f"wrote {len(manifest.outputs) + 1} files to {cfg.output_dir}")
        for r in failed:
            print(f"replication {r['replication']} failed: {r['error']}", file=sys.stderr)
        return 1 if failed else 0
    table = report(args.manifest)
    print(table.to_text(SUMMARY_COLUMNS))
    if args.csv:
        table.write_csv(args.csv, SUMMARY_COLUMNS)
    return 0


if __name__ == "__main__":
    sys.exit(main())
