"""A small MSE-versus-budget benchmark through the experiment harness.

Run with:  python demos/03_mse_benchmark.py
The same sweep is available from the shell:

  bench --game soug:n=14,m=50,seed=5 --algos svarm,s-svarm,s-svarm-plus,approshapley \
        --budgets 200,400,800 --reps 40 --seed 3 --out results/

Identical configs (including the master seed) give byte-identical CSVs.
"""

from pathlib import Path

from svarm import ExperimentConfig, run_experiment

cfg = ExperimentConfig(
    game="soug:n=14,m=50,seed=5",
    algorithms=("svarm", "s-svarm", "s-svarm-plus", "approshapley"),
    budgets=(200, 400, 800),
    repetitions=40,
    master_seed=3,
    out_dir=Path("results"),
)
results = run_experiment(cfg)

print(f"{'algorithm':16s} {'T':>6s} {'mean mse':>12s} {'stderr':>10s}")
for row in results.aggregates:
    print(f"{row.algorithm:16s} {row.budget:6d} {row.mean_mse:12.3e} {row.stderr:10.1e}")

print("\nper-run details in results/runs.csv, aggregates in results/aggregate.csv")
