"""Permutation-sampling baseline (ApproShapley).

Draws uniform player orderings and credits each player the worth increase
observed when it joins the prefix in front of it. Prefix worths are
reused, so a full ordering costs n paid evaluations (the empty prefix is
free); within one ordering the credited increments telescope to the grand
coalition's worth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BudgetedGame, Coalition, Game, ShapleyVector
from .errors import BudgetTooSmall
from .sampling import Rng, make_rng, sample_permutation


@dataclass
class ApproShapleyInfo:
    """Full-output record of one run."""

    sums: list[float]
    counts: list[int]
    permutations_completed: int
    spent: int


def approshapley_run(
    game: Game,
    budget: int,
    seed: int | None = None,
    *,
    rng: Rng | None = None,
    full_output: bool = False,
):
    """Estimate all Shapley values by permutation sampling.

    Needs ``budget >= n + 1`` and spends it exactly. The final ordering
    may be cut short: increments whose prefix evaluation no longer fits
    the budget are discarded, already-credited ones are kept. Players
    that never received an increment (impossible at the budget floor)
    would report 0. Returns the per-player mean increment, or
    ``(vector, info)`` with ``full_output=True``.
    """
    n = game.n
    if budget < n + 1:
        raise BudgetTooSmall(f"need budget >= n+1 = {n + 1}, got {budget}")
    g = game if isinstance(game, BudgetedGame) else BudgetedGame(game, limit=budget)
    if rng is None:
        rng = make_rng(seed)

    sums = [0.0] * n
    counts = [0] * n
    completed = 0
    t = 0
    while t < budget:
        order = sample_permutation(rng, n).tolist()
        prefix = 0
        previous = 0.0
        truncated = False
        for player in order:
            if t == budget:
                truncated = True
                break
            prefix |= 1 << player
            worth = g.value(Coalition(prefix, n))
            t += 1
            sums[player] += worth - previous
            counts[player] += 1
            previous = worth
        if not truncated:
            completed += 1

    phi = np.array([s / c if c else 0.0 for s, c in zip(sums, counts)])
    if full_output:
        return phi, ApproShapleyInfo(sums, counts, completed, g.spent)
    return phi
