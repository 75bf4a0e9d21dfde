"""Stratified estimators: per-size strata with maximum sample reuse.

Splitting each signed average by coalition size gives, per player, n
positive and n negative strata whose means combine into the Shapley value
as ``phi_i = (1/n) * sum_l (plus[i,l] - minus[i,l])``. One sampled
coalition A then updates exactly one stratum of *every* player: the
size-(|A|-1) positive stratum of each member and the size-|A| negative
stratum of each outsider.

The border sizes 0, 1, n-1, n contain so few coalitions that their strata
are computed exactly up front (2n+1 evaluations); a permutation-slicing
warm-up seeds the remaining strata with one unbiased sample each. The
main loop draws a size from a configurable law over {2..n-2} and a
uniform coalition of that size. The "plus" variant drops the warm-up and
samples coalitions without replacement instead, falling back to exact
answers once the powerset is exhausted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BudgetedGame, Coalition, Game, ShapleyVector
from .errors import BudgetTooSmall, DomainError
from .exact import exact_shapley
from .sampling import (
    Rng,
    SizeDistribution,
    balanced_size_distribution,
    make_rng,
    sample_permutation,
    sample_uniform_subset,
    uniform_size_distribution,
)

SIZE_LAWS = ("balanced", "uniform")


class StratumTable:
    """Running means and counters for every (player, size) stratum.

    ``phi_plus[i][l]`` tracks the mean worth of sampled coalitions of size
    l+1 that contain player i, ``phi_minus[i][l]`` of sampled coalitions
    of size l that do not. The negative size-0 stratum holds only the
    empty coalition, whose worth is 0 by definition, so it starts out
    exactly known with its counter at 1 and is never sampled.
    """

    __slots__ = ("n", "phi_plus", "phi_minus", "c_plus", "c_minus")

    def __init__(self, n: int):
        self.n = n
        self.phi_plus = [[0.0] * n for _ in range(n)]
        self.phi_minus = [[0.0] * n for _ in range(n)]
        self.c_plus = [[0] * n for _ in range(n)]
        self.c_minus = [[0] * n for _ in range(n)]
        for i in range(n):
            self.c_minus[i][0] = 1

    def update(self, coalition: Coalition, worth: float) -> None:
        """Fold one observed worth into exactly one stratum per player."""
        s = coalition.size
        if s == 0:
            raise DomainError("cannot update from the empty coalition")
        n = self.n
        col_plus = s - 1
        bits = coalition.bits
        while bits:
            lsb = bits & -bits
            i = lsb.bit_length() - 1
            row_c = self.c_plus[i]
            row_c[col_plus] += 1
            row_phi = self.phi_plus[i]
            row_phi[col_plus] += (worth - row_phi[col_plus]) / row_c[col_plus]
            bits ^= lsb
        bits = ((1 << n) - 1) ^ coalition.bits
        while bits:
            lsb = bits & -bits
            i = lsb.bit_length() - 1
            row_c = self.c_minus[i]
            row_c[s] += 1
            row_phi = self.phi_minus[i]
            row_phi[s] += (worth - row_phi[s]) / row_c[s]
            bits ^= lsb

    def shapley(self) -> ShapleyVector:
        """Per-player mean over all strata of the plus-minus differences."""
        plus = np.asarray(self.phi_plus)
        minus = np.asarray(self.phi_minus)
        return (plus - minus).sum(axis=1) / self.n

    def shapley_observed(self) -> ShapleyVector:
        """Like :meth:`shapley`, but each signed sum is divided by its own
        number of strata with at least one sample (never blindly by n)."""
        plus = np.asarray(self.phi_plus)
        minus = np.asarray(self.phi_minus)
        seen_plus = (np.asarray(self.c_plus) > 0).sum(axis=1)
        seen_minus = (np.asarray(self.c_minus) > 0).sum(axis=1)
        return plus.sum(axis=1) / np.maximum(seen_plus, 1) - minus.sum(axis=1) / np.maximum(seen_minus, 1)


def exact_calculation(game: BudgetedGame, table: StratumTable) -> None:
    """Evaluate every coalition of sizes 1, n-1 and n (2n+1 paid evaluations).

    Feeding them through the update rule makes the border strata exact:
    positive sizes 0, n-2, n-1 and negative sizes 1, n-1 per player, on
    top of the negative size-0 stratum that is known from the start.
    """
    n = game.n
    full = (1 << n) - 1
    for i in range(n):
        mask = 1 << i
        table.update(Coalition(mask, n), game.value(Coalition(mask, n)))
    for i in range(n):
        mask = full ^ (1 << i)
        table.update(Coalition(mask, n), game.value(Coalition(mask, n)))
    table.update(Coalition(full, n), game.value(Coalition(full, n)))


def _warmup(game: BudgetedGame, rng: Rng, table: StratumTable, positive: bool) -> None:
    # One pass per size s in 2..n-2: slice a fresh permutation into
    # floor(n/s) blocks, evaluate each block (positive) or its complement
    # (negative) once, and seed only the block members' strata. Leftover
    # players are padded up to size s with random others, but only the
    # leftovers are seeded from the padded set, keeping every seeding
    # coalition uniform among the size-s sets containing the player.
    n = game.n
    full = (1 << n) - 1
    for s in range(2, n - 1):
        perm = sample_permutation(rng, n).tolist()
        col = s - 1 if positive else n - s
        for k in range(n // s):
            block = perm[k * s : (k + 1) * s]
            mask = 0
            for p in block:
                mask |= 1 << p
            worth = game.value(Coalition(mask if positive else full ^ mask, n))
            _seed_members(table, block, col, worth, positive)
        r = n % s
        if r:
            leftover = perm[n - r :]
            mask = 0
            for p in leftover:
                mask |= 1 << p
            others = [p for p in range(n) if not (mask >> p) & 1]
            pad_idx = rng.permutation(len(others))[: s - r]
            padded = mask
            for j in pad_idx:
                padded |= 1 << others[int(j)]
            worth = game.value(Coalition(padded if positive else full ^ padded, n))
            _seed_members(table, leftover, col, worth, positive)


def _seed_members(table, players, col, worth, positive) -> None:
    if positive:
        for i in players:
            table.phi_plus[i][col] = worth
            table.c_plus[i][col] = 1
    else:
        for i in players:
            table.phi_minus[i][col] = worth
            table.c_minus[i][col] = 1


def warmup_positive(game: BudgetedGame, rng: Rng, table: StratumTable) -> None:
    """Seed every positive stratum of sizes 2..n-2 with one sample.

    Costs exactly ``sum_{s=2}^{n-2} ceil(n/s)`` evaluations.
    """
    _warmup(game, rng, table, positive=True)


def warmup_negative(game: BudgetedGame, rng: Rng, table: StratumTable) -> None:
    """Seed every negative stratum of sizes 2..n-2 with one sample.

    Evaluates the complement of each permutation block, so stratum n-s is
    seeded while sweeping s over 2..n-2; same cost as the positive pass.
    """
    _warmup(game, rng, table, positive=False)


def warmup_budget(n: int) -> int:
    """Paid evaluations of one warm-up pass."""
    return sum(math.ceil(n / s) for s in range(2, n - 1))


def minimum_budget(n: int) -> int:
    """Smallest budget for the stratified run: exact border strata plus both warm-ups."""
    return 2 * n + 1 + 2 * warmup_budget(n)


def _size_law(size_dist: str | SizeDistribution, n: int) -> SizeDistribution:
    if isinstance(size_dist, SizeDistribution):
        return size_dist
    if size_dist == "balanced":
        return balanced_size_distribution(n)
    if size_dist == "uniform":
        return uniform_size_distribution(2, n - 2)
    raise DomainError(f"unknown size law {size_dist!r}; expected one of {SIZE_LAWS}")


def _exact_fallback(game, budget, full_output):
    # With three or fewer players the budget floor already covers the
    # whole powerset, so just compute exactly (2^n - 1 paid evaluations).
    n = game.n
    if budget < (1 << n) - 1:
        raise BudgetTooSmall(f"need budget >= 2^n-1 = {(1 << n) - 1}, got {budget}")
    g = game if isinstance(game, BudgetedGame) else BudgetedGame(game, limit=budget)
    phi = exact_shapley(g)
    if full_output:
        return phi, StratifiedInfo(None, g.spent, 0, False, budget - g.spent)
    return phi


@dataclass
class StratifiedInfo:
    """Full-output record of one stratified run."""

    table: StratumTable | None
    spent: int
    samples: int  # main-loop updates after the deterministic phases
    exhausted: bool  # plus variant only: powerset ran out before the budget
    unspent: int


def stratified_svarm_run(
    game: Game,
    budget: int,
    seed: int | None = None,
    *,
    size_dist: str | SizeDistribution = "balanced",
    rng: Rng | None = None,
    full_output: bool = False,
):
    """Stratified estimation with replacement: exact borders, warm-up, sampling.

    ``size_dist`` selects the main-loop size law: ``"balanced"`` (the
    stratum-balancing law) or ``"uniform"`` over 2..n-2. Needs
    ``budget >= minimum_budget(n)`` and spends it exactly. For n <= 3 all
    values are computed exactly instead (the borders alone cover
    everything).
    """
    n = game.n
    if n <= 3:
        return _exact_fallback(game, budget, full_output)
    floor = minimum_budget(n)
    if budget < floor:
        raise BudgetTooSmall(f"need budget >= {floor} for n={n}, got {budget}")
    g = game if isinstance(game, BudgetedGame) else BudgetedGame(game, limit=budget)
    if rng is None:
        rng = make_rng(seed)
    law = _size_law(size_dist, n)

    table = StratumTable(n)
    exact_calculation(g, table)
    warmup_positive(g, rng, table)
    warmup_negative(g, rng, table)

    t = floor
    samples = 0
    while t < budget:
        s = law.sample(rng)
        coalition = sample_uniform_subset(rng, n, s)
        table.update(coalition, g.value(coalition))
        t += 1
        samples += 1

    phi = table.shapley()
    if full_output:
        return phi, StratifiedInfo(table, g.spent, samples, False, budget - t)
    return phi


class WithoutReplacementState:
    """Bookkeeping for drawing each mid-size coalition at most once.

    Every coalition of size s carries the fixed weight
    ``size_law(s) / C(n, s)`` (the same per-coalition mass as one
    with-replacement draw), and each step picks a remaining coalition with
    probability proportional to its weight. Realized in two steps: the
    size is drawn with probability proportional to the total remaining
    weight of its class, ``size_law(s) * remaining(s) / C(n, s)``, then an
    unseen coalition of that size uniformly. On a fresh state the size
    draw therefore follows the size law exactly, and as a class depletes
    its mass flows to the others until the powerset is exhausted.

    Unseen coalitions are drawn by rejection against the seen-set while
    less than half the size class is used up; past that point the unseen
    masks are materialized once and consumed by swap-removal, bounding the
    cost per draw. Memory grows with the number of draws.
    """

    def __init__(self, n: int, law: SizeDistribution):
        self.n = n
        self.sizes = [int(s) for s in law.support]
        self.weights = {int(s): float(p) for s, p in zip(law.support, law.probs)}
        self.remaining = {s: math.comb(n, s) for s in self.sizes}
        self.totals = dict(self.remaining)
        self._seen: dict[int, set[int]] = {s: set() for s in self.sizes}
        self._unseen: dict[int, list[int] | None] = {s: None for s in self.sizes}

    def any_remaining(self) -> bool:
        return any(self.remaining[s] > 0 for s in self.sizes)

    def size_probabilities(self) -> np.ndarray:
        """Current draw law over the supported sizes (zeros once exhausted)."""
        raw = np.array(
            [self.weights[s] * self.remaining[s] / self.totals[s] for s in self.sizes]
        )
        total = raw.sum()
        return raw / total if total > 0 else raw

    def sample_size(self, rng: Rng) -> int:
        probs = self.size_probabilities()
        idx = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
        while idx < len(self.sizes) and self.remaining[self.sizes[idx]] == 0:
            idx += 1  # float-edge guard; never loops past a live size
        if idx >= len(self.sizes):
            idx = max(j for j, s in enumerate(self.sizes) if self.remaining[s] > 0)
        return self.sizes[idx]

    def draw_unseen(self, rng: Rng, s: int) -> Coalition:
        if self.remaining[s] <= 0:
            raise DomainError(f"no unseen coalitions of size {s} left")
        seen = self._seen[s]
        unseen = self._unseen[s]
        if unseen is None:
            if len(seen) * 2 < self.totals[s]:
                while True:
                    candidate = sample_uniform_subset(rng, self.n, s)
                    if candidate.bits not in seen:
                        seen.add(candidate.bits)
                        self.remaining[s] -= 1
                        return candidate
            unseen = [
                mask
                for mask in _masks_of_size(self.n, s)
                if mask not in seen
            ]
            self._unseen[s] = unseen
            seen.clear()  # the list takes over; the set is dead weight now
        j = int(rng.integers(len(unseen)))
        mask = unseen[j]
        unseen[j] = unseen[-1]
        unseen.pop()
        self.remaining[s] -= 1
        return Coalition(mask, self.n)


def _masks_of_size(n: int, s: int):
    # Gosper's hack: ascending enumeration of all n-bit masks with s bits.
    mask = (1 << s) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        low = mask & -mask
        ripple = mask + low
        mask = ripple | (((mask ^ ripple) >> 2) // low)


def stratified_svarm_plus_run(
    game: Game,
    budget: int,
    seed: int | None = None,
    *,
    size_dist: str | SizeDistribution = "balanced",
    rng: Rng | None = None,
    full_output: bool = False,
):
    """Stratified estimation without replacement (no warm-up).

    After the exact border calculation (2n+1 evaluations, the only floor)
    the main loop keeps drawing unseen mid-size coalitions until the
    budget or the powerset runs out. Aggregation averages each signed sum
    only over the strata with at least one sample, so never-touched strata
    cannot bias the estimate; once every coalition has been seen the
    result is exact and any leftover budget is reported as unspent in the
    full-output info. For n <= 3 all values are computed exactly instead.
    """
    n = game.n
    if n <= 3:
        return _exact_fallback(game, budget, full_output)
    if budget < 2 * n + 1:
        raise BudgetTooSmall(f"need budget >= 2n+1 = {2 * n + 1}, got {budget}")
    g = game if isinstance(game, BudgetedGame) else BudgetedGame(game, limit=budget)
    if rng is None:
        rng = make_rng(seed)
    law = _size_law(size_dist, n)

    table = StratumTable(n)
    exact_calculation(g, table)
    state = WithoutReplacementState(n, law)

    t = 2 * n + 1
    samples = 0
    while t < budget and state.any_remaining():
        s = state.sample_size(rng)
        coalition = state.draw_unseen(rng, s)
        table.update(coalition, g.value(coalition))
        t += 1
        samples += 1

    phi = table.shapley_observed()
    if full_output:
        return phi, StratifiedInfo(
            table, g.spent, samples, not state.any_remaining(), budget - t
        )
    return phi
