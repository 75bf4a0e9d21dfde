"""The signed-sampling estimator (SVARM).

The Shapley value of player i splits into a difference of two weighted
averages of plain coalition worths: one over coalitions including i, one
over coalitions excluding i. Instead of estimating the 2n averages with
dedicated samples, the algorithm alternates between one coalition drawn
from the positive law and one from the negative law, and folds each worth
into the running mean of *every* player whose average contains that
coalition. A short warm-up gives every mean one sample first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BudgetedGame, Coalition, Game, ShapleyVector
from .errors import BudgetTooSmall
from .sampling import (
    Rng,
    make_rng,
    sample_negative_coalition,
    sample_positive_coalition,
    sample_weighted_subset,
)


@dataclass
class SignedEstimates:
    """Per-player running means of the two signed averages, with sample counts.

    After the warm-up, ``phi_plus[i]`` is the arithmetic mean of exactly
    ``c_plus[i]`` observed worths of coalitions containing i (likewise for
    the minus side with coalitions excluding i). Counters start at 1 to
    match the estimator's bookkeeping; the warm-up overwrites the zero
    prior with the first real sample.
    """

    phi_plus: list[float]
    phi_minus: list[float]
    c_plus: list[int]
    c_minus: list[int]

    @classmethod
    def fresh(cls, n: int) -> "SignedEstimates":
        return cls([0.0] * n, [0.0] * n, [1] * n, [1] * n)

    @property
    def n(self) -> int:
        return len(self.phi_plus)

    def shapley(self) -> ShapleyVector:
        return np.asarray(self.phi_plus) - np.asarray(self.phi_minus)


def svarm_warmup(game: BudgetedGame, rng: Rng, estimates: SignedEstimates) -> None:
    """Seed every signed mean with one sample (at most 2n paid evaluations).

    For each player two sets are drawn i.i.d. from the marginal-weight
    law over the other players; the positive mean gets the worth of the
    set plus the player, the negative mean the worth of the set itself.
    An empty negative draw is free (worth 0 by definition) but still
    counts as the seeding sample.
    """
    n = game.n
    for i in range(n):
        a_plus = sample_weighted_subset(rng, n, i)
        a_minus = sample_weighted_subset(rng, n, i)
        estimates.phi_plus[i] = game.value(a_plus.add(i))
        estimates.phi_minus[i] = game.value(a_minus)
        estimates.c_plus[i] = 1
        estimates.c_minus[i] = 1


@dataclass
class SvarmInfo:
    """Full-output record of one run."""

    estimates: SignedEstimates
    spent: int
    iterations: int


def svarm_run(
    game: Game,
    budget: int,
    seed: int | None = None,
    *,
    rng: Rng | None = None,
    full_output: bool = False,
):
    """Estimate all Shapley values with at most ``budget`` evaluations.

    Needs ``budget >= 2n + 2``: a full warm-up plus at least one sampled
    pair. The main loop draws one positive and one negative coalition per
    iteration (two paid evaluations; a drawn empty set is free but the
    saved token is not reinvested), so at most one budget token is left
    unused. Returns the estimate vector, or ``(vector, info)`` with
    ``full_output=True``.
    """
    n = game.n
    if budget < 2 * n + 2:
        raise BudgetTooSmall(f"need budget >= 2n+2 = {2 * n + 2}, got {budget}")
    g = game if isinstance(game, BudgetedGame) else BudgetedGame(game, limit=budget)
    if rng is None:
        rng = make_rng(seed)

    estimates = SignedEstimates.fresh(n)
    svarm_warmup(g, rng, estimates)

    phi_plus, phi_minus = estimates.phi_plus, estimates.phi_minus
    c_plus, c_minus = estimates.c_plus, estimates.c_minus
    full = (1 << n) - 1
    t = 2 * n
    iterations = 0
    while t + 2 <= budget:
        a_plus = sample_positive_coalition(rng, n)
        a_minus = sample_negative_coalition(rng, n)
        v_plus = g.value(a_plus)
        v_minus = g.value(a_minus)
        bits = a_plus.bits
        while bits:
            lsb = bits & -bits
            i = lsb.bit_length() - 1
            c_plus[i] += 1
            phi_plus[i] += (v_plus - phi_plus[i]) / c_plus[i]
            bits ^= lsb
        bits = full ^ a_minus.bits
        while bits:
            lsb = bits & -bits
            i = lsb.bit_length() - 1
            c_minus[i] += 1
            phi_minus[i] += (v_minus - phi_minus[i]) / c_minus[i]
            bits ^= lsb
        t += 2
        iterations += 1

    phi = estimates.shapley()
    if full_output:
        return phi, SvarmInfo(estimates, g.spent, iterations)
    return phi
