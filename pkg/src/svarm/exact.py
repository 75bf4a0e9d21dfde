"""Brute-force ground truth: exact values, per-size strata, spread diagnostics.

These enumerate the full powerset, so they are guarded by feasibility caps
(overridable with ``force=True``). The game is treated as a black box and
each nonempty coalition is evaluated exactly once per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Coalition, Game, ShapleyVector, marginal_weight
from .errors import TooLarge

SHAPLEY_GUARD = 25
STRATA_GUARD = 20


def _check_guard(n: int, guard: int, force: bool) -> None:
    if n > guard and not force:
        raise TooLarge(
            f"n={n} exceeds the 2^n enumeration guard of {guard}; pass force=True to override"
        )


def _value_table(game: Game) -> np.ndarray:
    """Worth of every coalition, indexed by bitmask; 2^n - 1 evaluations."""
    n = game.n
    values = np.zeros(1 << n, dtype=np.float64)
    for mask in range(1, 1 << n):
        values[mask] = game.value(Coalition(mask, n))
    return values


def _popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc[1 << i : 1 << (i + 1)] = pc[: 1 << i] + 1
    return pc


def _shapley_from_table(values: np.ndarray, n: int) -> ShapleyVector:
    # One pass over the powerset: each worth nu(S) feeds +w_{|S|-1} into
    # every member's positive sum and -w_{|S|} into every outsider's
    # negative sum, instead of assembling n 2^{n-1} marginal differences.
    pc = _popcounts(n)
    weights = np.array([marginal_weight(n, s) for s in range(n)])
    w_member = weights[np.maximum(pc - 1, 0)] * values  # mask 0 has value 0
    w_outside = weights[np.minimum(pc, n - 1)] * values  # full mask is never "outside"
    idx = np.arange(1 << n, dtype=np.int64)
    phi = np.empty(n, dtype=np.float64)
    for i in range(n):
        has = (idx >> i) & 1 == 1
        phi[i] = w_member[has].sum() - w_outside[~has].sum()
    return phi


def exact_shapley(game: Game, force: bool = False) -> ShapleyVector:
    """Exact Shapley values by full enumeration (up to float accumulation)."""
    _check_guard(game.n, SHAPLEY_GUARD, force)
    return _shapley_from_table(_value_table(game), game.n)


def _strata_from_table(values: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    pc = _popcounts(n)
    idx = np.arange(1 << n, dtype=np.int64)
    counts = np.array([float(math.comb(n - 1, l)) for l in range(n)])
    plus = np.empty((n, n), dtype=np.float64)
    minus = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        has = (idx >> i) & 1 == 1
        plus[i] = np.bincount(pc[has] - 1, weights=values[has], minlength=n) / counts
        minus[i] = np.bincount(pc[~has], weights=values[~has], minlength=n) / counts
    return plus, minus


def exact_strata(game: Game, force: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Exact per-size strata means, as two (n, n) arrays indexed [player, size].

    ``plus[i, l]`` is the mean worth of ``S | {i}`` over the subsets S of
    the other players with |S| = l; ``minus[i, l]`` the mean worth of S
    itself. Averaging the row differences reproduces the Shapley value,
    which is verified internally against the one-pass computation.
    """
    _check_guard(game.n, STRATA_GUARD, force)
    n = game.n
    values = _value_table(game)
    plus, minus = _strata_from_table(values, n)
    reconstructed = (plus - minus).mean(axis=1)
    direct = _shapley_from_table(values, n)
    if not np.allclose(reconstructed, direct, rtol=0.0, atol=1e-9):
        raise AssertionError("strata reconstruction drifted from the direct computation")
    return plus, minus


@dataclass
class StrataDiagnostics:
    """Population variances and ranges of coalition worths, per player.

    ``var_plus[i, l]`` / ``var_minus[i, l]`` are the exact population
    variances (divide by the stratum count, not count-1) within the size-l
    stratum including / excluding player i, the ``range_*`` arrays the
    max-minus-min spreads, and ``var_*_total[i]`` the unstratified
    variances under the marginal-weight law (uniform over sizes, uniform
    within a size). Constant games have all-zero strata entries.
    """

    var_plus: np.ndarray
    var_minus: np.ndarray
    range_plus: np.ndarray
    range_minus: np.ndarray
    var_plus_total: np.ndarray
    var_minus_total: np.ndarray


def diagnostics(game: Game, force: bool = False) -> StrataDiagnostics:
    """Exact strata variances/ranges and per-player totals for ``game``."""
    _check_guard(game.n, STRATA_GUARD, force)
    n = game.n
    values = _value_table(game)
    pc = _popcounts(n)
    idx = np.arange(1 << n, dtype=np.int64)
    counts = np.array([float(math.comb(n - 1, l)) for l in range(n)])

    var_plus = np.empty((n, n))
    var_minus = np.empty((n, n))
    range_plus = np.empty((n, n))
    range_minus = np.empty((n, n))
    var_plus_total = np.empty(n)
    var_minus_total = np.empty(n)

    for i in range(n):
        has = (idx >> i) & 1 == 1
        for sign, vals, strata in (
            (0, values[has], pc[has] - 1),
            (1, values[~has], pc[~has]),
        ):
            mean = np.bincount(strata, weights=vals, minlength=n) / counts
            mom2 = np.bincount(strata, weights=vals * vals, minlength=n) / counts
            var = np.maximum(mom2 - mean * mean, 0.0)
            lo = np.full(n, np.inf)
            hi = np.full(n, -np.inf)
            np.minimum.at(lo, strata, vals)
            np.maximum.at(hi, strata, vals)
            # Under the marginal-weight law the size is uniform, so the
            # total moments are plain means of the per-size moments.
            total = max(mom2.mean() - mean.mean() ** 2, 0.0)
            if sign == 0:
                var_plus[i], range_plus[i], var_plus_total[i] = var, hi - lo, total
            else:
                var_minus[i], range_minus[i], var_minus_total[i] = var, hi - lo, total

    return StrataDiagnostics(
        var_plus, var_minus, range_plus, range_minus, var_plus_total, var_minus_total
    )
