"""The four budgeted estimators side by side on one game.

Run with:  python demos/02_budgeted_estimators.py
"""

import numpy as np

from svarm import (
    BudgetedGame,
    approshapley_run,
    closed_form_shapley,
    generate_soug,
    make_rng,
    stratified_svarm_plus_run,
    stratified_svarm_run,
    svarm_run,
)

game = generate_soug(make_rng(1), 12, 50)
exact = closed_form_shapley(game)
budget = 400

# Each run owns a fresh budget meter; value() calls with a nonempty
# coalition cost one token, the empty coalition is free.
print(f"n=12, budget T={budget}, exact values known in closed form\n")
for name, runner in [
    ("svarm", svarm_run),
    ("s-svarm", stratified_svarm_run),
    ("s-svarm-plus", stratified_svarm_plus_run),
    ("approshapley", approshapley_run),
]:
    metered = BudgetedGame(game, limit=budget)
    estimate = runner(metered, budget, seed=42)
    mse = float(((estimate - exact) ** 2).mean())
    print(f"{name:14s} spent={metered.spent:4d}  mse={mse:.3e}")

# The estimators are incremental in the budget: more evaluations, less error.
print("\nsvarm error vs budget (single seeds, so noisy):")
for budget in (100, 400, 1600, 6400):
    estimate = svarm_run(game, budget, seed=7)
    print(f"  T={budget:5d}  mse={float(((estimate - exact) ** 2).mean()):.3e}")

# The no-replacement variant turns exact once it has seen every coalition.
small = generate_soug(make_rng(2), 8, 30)
estimate = stratified_svarm_plus_run(small, 1 << 8, seed=0)
print("\nno-replacement variant after the full powerset:",
      np.abs(estimate - closed_form_shapley(small)).max(), "max deviation")
