"""Desk-scale versions of the Gamma, sensor and Cox comparison tables.

    python scripts/desk_tables.py --out runs/desk --seed 1 [--only gamma]

Each experiment/kernel pair is run through the experiment harness with the
``desk`` preset; the per-kernel mean rows are collected into one table.
"""

from __future__ import annotations

import argparse
import csv
import logging
from pathlib import Path

from twocoin.diagnostics import SummaryTable
from twocoin.experiments import build_config, run_experiment

GROUPS = {
    "gamma": [("gamma-trunc", "mh-exact"), ("gamma-trunc", "barker-exact"),
              ("gamma-trunc", "barker-bf")],
    "mixture": [("ram-mixture", "ram-aux"), ("ram-mixture", "barker-bf")],
    "sensor": [("ram-sensor", "ram-aux"), ("ram-sensor", "barker-bf")],
    "cox": [("cox-gp", "mh-inexact-cox"), ("cox-gp", "barker-bf")],
}


def mean_row(path: Path) -> dict:
    with path.open() as fh:
        return list(csv.DictReader(fh))[-1]


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="runs/desk")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--only", choices=sorted(GROUPS), action="append")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    for group in args.only or GROUPS:
        table = SummaryTable()
        for experiment, kernel in GROUPS[group]:
            out = Path(args.out) / f"{experiment}_{kernel}"
            cfg = build_config({"experiment": experiment, "kernel": kernel, "preset": "desk",
                                "seed": args.seed, "output_dir": str(out),
                                "workers": args.workers})
            run_experiment(cfg)
            row = mean_row(out / "summary.csv")
            timing = mean_row(out / "timing.csv")
            table.add(kernel, ess=float(row["ess"]), wall_time_sec=float(timing["wall_time_sec"]),
                      acceptance_rate=float(row["acceptance_rate"]),
                      mean_loops=float(row["mean_loops"]), max_loops=float(row["max_loops"]))
        print(f"\n{group}")
        print(table.to_text(["method", "ess", "ess_per_sec", "acceptance_rate", "mean_loops",
                             "max_loops"]))
        table.write_csv(Path(args.out) / f"table_{group}.csv",
                        ["method", "ess", "ess_per_sec", "wall_time_sec", "acceptance_rate",
                         "mean_loops", "max_loops"])


if __name__ == "__main__":
    main()
