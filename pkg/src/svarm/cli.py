"""The ``bench`` command line: sweep budgets and write the two CSV files."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import ALGORITHMS, ExperimentConfig, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description=(
            "Benchmark budgeted Shapley value estimators on a game: "
            "mean squared error against the exact values, per budget, "
            "averaged over seeded repetitions."
        ),
    )
    parser.add_argument(
        "--game",
        required=True,
        help='shoe:n=50 | airport | airport:n=12 | soug:n=20,m=50,seed=7 | table:PATH | bridge:cmd="..."',
    )
    parser.add_argument(
        "--algos",
        required=True,
        help=f"comma-separated subset of {','.join(sorted(ALGORITHMS))}",
    )
    parser.add_argument(
        "--budgets", required=True, help="comma-separated evaluation budgets, e.g. 1000,2000,4000"
    )
    parser.add_argument("--reps", type=int, default=100, help="repetitions per cell (default 100)")
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument(
        "--out", default="results", help="output directory for runs.csv and aggregate.csv"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(
        game=args.game,
        algorithms=tuple(a.strip() for a in args.algos.split(",") if a.strip()),
        budgets=tuple(int(t) for t in args.budgets.split(",") if t.strip()),
        repetitions=args.reps,
        master_seed=args.seed,
        out_dir=Path(args.out),
    )
    results = run_experiment(cfg)
    for algorithm, budget, reason in results.skipped:
        print(f"skipped {algorithm} at T={budget}: {reason}", file=sys.stderr)
    width = max(len(a) for a in cfg.algorithms)
    for row in results.aggregates:
        print(
            f"{row.algorithm:<{width}}  T={row.budget:<8d} "
            f"mse={row.mean_mse:.6e}  stderr={row.stderr:.2e}  reps={row.reps}"
        )
    print(f"wrote {cfg.out_dir}/runs.csv and {cfg.out_dir}/aggregate.csv")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
