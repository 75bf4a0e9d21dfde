"""Shared fixtures: reference games, a trace recorder, and reusable run batches."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import pytest

from svarm import (
    BudgetedGame,
    Coalition,
    FunctionGame,
    Game,
    closed_form_shapley,
    derive_seed,
    generate_soug,
    make_rng,
    stratified_svarm_run,
    svarm_run,
)

SOUG6_SEED = 3
SVARM_T = 60
RUNS = 10_000


class RecordingGame(Game):
    """Pass-through wrapper that logs every coalition it is asked to price."""

    def __init__(self, inner: Game):
        self.inner = inner
        self.n = inner.n
        self.trace: list[int] = []

    def value(self, coalition: Coalition) -> float:
        self.trace.append(coalition.bits)
        return self.inner.value(coalition)


def glove_game() -> FunctionGame:
    # Two left-glove holders {0, 1} and one right-glove holder {2};
    # worth = number of matched pairs. Shapley values (1/6, 1/6, 2/3).
    return FunctionGame(
        3,
        lambda s: min(
            len(s.intersection(Coalition(0b011, 3))),
            len(s.intersection(Coalition(0b100, 3))),
        ),
    )


def mask_game(n: int) -> FunctionGame:
    """Injective worths (the bitmask itself), so a value identifies its coalition."""
    return FunctionGame(n, lambda s: float(s.bits))


def constant_game(n: int, c: float = 2.5) -> FunctionGame:
    return FunctionGame(n, lambda s: c)


def make_seed(label: str, rep: int) -> int:
    return derive_seed(2024, label, rep)


@dataclass
class RunBatch:
    """Estimates (and optional counters) of many independent runs, with build time."""

    phis: np.ndarray
    c_plus: np.ndarray | None = None
    c_minus: np.ndarray | None = None
    seconds: float = 0.0


@pytest.fixture(scope="session")
def soug6():
    game = generate_soug(make_rng(SOUG6_SEED), 6, 50)
    return game, closed_form_shapley(game)


@pytest.fixture(scope="session")
def svarm_batch(soug6) -> RunBatch:
    """10^4 independent runs of the signed estimator at T=60, n=6."""
    game, _ = soug6
    started = time.monotonic()
    phis = np.empty((RUNS, 6))
    c_plus = np.empty((RUNS, 6), dtype=np.int64)
    c_minus = np.empty((RUNS, 6), dtype=np.int64)
    for r in range(RUNS):
        phi, info = svarm_run(game, SVARM_T, seed=make_seed("svarm-batch", r), full_output=True)
        phis[r] = phi
        c_plus[r] = info.estimates.c_plus
        c_minus[r] = info.estimates.c_minus
    return RunBatch(phis, c_plus, c_minus, time.monotonic() - started)


@pytest.fixture(scope="session")
def svarm_batch_double(soug6) -> RunBatch:
    """10^4 signed-estimator runs with the post-warm-up budget doubled (T=108)."""
    game, _ = soug6
    started = time.monotonic()
    phis = np.empty((RUNS, 6))
    for r in range(RUNS):
        phis[r] = svarm_run(game, 108, seed=make_seed("svarm-double", r))
    return RunBatch(phis, seconds=time.monotonic() - started)


@pytest.fixture(scope="session")
def stratified_batch(soug6) -> RunBatch:
    """10^4 stratified runs at T=60: estimates plus final stratum counters."""
    game, _ = soug6
    started = time.monotonic()
    phis = np.empty((RUNS, 6))
    c_plus = np.empty((RUNS, 6, 6), dtype=np.int64)
    c_minus = np.empty((RUNS, 6, 6), dtype=np.int64)
    for r in range(RUNS):
        phi, info = stratified_svarm_run(
            game, SVARM_T, seed=make_seed("s-svarm-batch", r), full_output=True
        )
        phis[r] = phi
        c_plus[r] = info.table.c_plus
        c_minus[r] = info.table.c_minus
    return RunBatch(phis, c_plus, c_minus, time.monotonic() - started)


@pytest.fixture(scope="session")
def stratified_uniform_batch(soug6) -> RunBatch:
    game, _ = soug6
    started = time.monotonic()
    phis = np.empty((RUNS, 6))
    for r in range(RUNS):
        phis[r] = stratified_svarm_run(
            game, SVARM_T, seed=make_seed("s-svarm-uni-batch", r), size_dist="uniform"
        )
    return RunBatch(phis, seconds=time.monotonic() - started)


def budgeted(game: Game, limit: int | None = None) -> BudgetedGame:
    return BudgetedGame(game, limit=limit)
