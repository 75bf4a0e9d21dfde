"""Experiment runner: MSE-versus-budget grids over games, estimators, seeds.

A run sweeps every (algorithm, budget, repetition) cell of a config. Each
cell gets its own seed derived from the master seed and the cell labels,
a fresh budget meter, and records the per-player squared errors against
the game's reference values (closed form where available, full
enumeration otherwise). Rep-level MSEs (mean over players) are aggregated
into a mean and a standard error across repetitions. Identical configs
produce byte-identical CSV output.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import approshapley_run
from .core import BudgetedGame, Game, ShapleyVector
from .errors import DomainError, NoReference
from .exact import SHAPLEY_GUARD, exact_shapley
from .games import (
    AirportGame,
    BridgeGame,
    ShoeGame,
    SougGame,
    TableGame,
    closed_form_shapley,
    generate_soug,
    load_table_game,
)
from .sampling import derive_seed, make_rng
from .signed import svarm_run
from .stratified import minimum_budget, stratified_svarm_plus_run, stratified_svarm_run

RUNS_HEADER = ("game", "algo", "T", "rep", "mse", "spent")
AGGREGATE_HEADER = ("game", "algo", "T", "mean_mse", "stderr", "reps")


def _run_svarm(game, budget, seed):
    return svarm_run(game, budget, seed)


def _run_stratified(game, budget, seed):
    return stratified_svarm_run(game, budget, seed)


def _run_stratified_uniform(game, budget, seed):
    return stratified_svarm_run(game, budget, seed, size_dist="uniform")


def _run_plus(game, budget, seed):
    return stratified_svarm_plus_run(game, budget, seed)


def _run_plus_uniform(game, budget, seed):
    return stratified_svarm_plus_run(game, budget, seed, size_dist="uniform")


def _run_appro(game, budget, seed):
    return approshapley_run(game, budget, seed)


def _run_exact(game, budget, seed):
    return exact_shapley(game)


def _min_svarm(n):
    return 2 * n + 2


def _min_stratified(n):
    return minimum_budget(n) if n >= 4 else (1 << n) - 1


def _min_plus(n):
    return 2 * n + 1 if n >= 4 else (1 << n) - 1


def _min_appro(n):
    return n + 1


def _min_exact(n):
    return (1 << n) - 1


ALGORITHMS = {
    "svarm": (_run_svarm, _min_svarm),
    "s-svarm": (_run_stratified, _min_stratified),
    "s-svarm-uniform": (_run_stratified_uniform, _min_stratified),
    "s-svarm-plus": (_run_plus, _min_plus),
    "s-svarm-plus-uniform": (_run_plus_uniform, _min_plus),
    "approshapley": (_run_appro, _min_appro),
    "exact": (_run_exact, _min_exact),
}


def parse_game_spec(spec: str) -> Game:
    """Build a game from its CLI spec string.

    ``shoe:n=50`` | ``airport`` | ``airport:n=12`` |
    ``soug:n=20,m=50,seed=7`` | ``table:<path>`` | ``bridge:cmd="..."``.
    """
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "table":
        if not rest:
            raise DomainError("table spec needs a path, e.g. table:games/my.tbl")
        return load_table_game(rest)
    if kind == "bridge":
        if not rest.startswith("cmd="):
            raise DomainError('bridge spec needs cmd=..., e.g. bridge:cmd="prog args"')
        cmd = rest[4:].strip()
        if len(cmd) >= 2 and cmd[0] == cmd[-1] and cmd[0] in "\"'":
            cmd = cmd[1:-1]
        return BridgeGame.spawn(cmd)
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not _:
                raise DomainError(f"bad game parameter {item!r} in {spec!r}")
            params[key.strip()] = int(value)
    if kind == "shoe":
        return ShoeGame(params.pop("n"))
    if kind == "airport":
        return AirportGame(params.pop("n", 100))
    if kind == "soug":
        n = params.pop("n")
        m = params.pop("m", 50)
        seed = params.pop("seed", 0)
        return generate_soug(make_rng(seed), n, m)
    raise DomainError(f"unknown game kind {kind!r} in {spec!r}")


def reference_shapley(game: Game) -> ShapleyVector:
    """Ground truth for error tracking: closed form, else full enumeration."""
    if isinstance(game, (ShoeGame, AirportGame, SougGame)):
        return closed_form_shapley(game)
    if game.n <= SHAPLEY_GUARD:
        return exact_shapley(game)
    raise NoReference(
        f"n={game.n} has no closed form and exceeds the enumeration guard"
    )


@dataclass
class ExperimentConfig:
    """One benchmark grid: a game, the estimators, budgets, and repetitions."""

    game: str
    algorithms: tuple[str, ...]
    budgets: tuple[int, ...]
    repetitions: int = 100
    master_seed: int = 0
    out_dir: Path | None = None

    def __post_init__(self):
        self.algorithms = tuple(self.algorithms)
        self.budgets = tuple(int(t) for t in self.budgets)
        if self.repetitions < 1:
            raise DomainError("need at least one repetition")
        if not self.algorithms or not self.budgets:
            raise DomainError("need at least one algorithm and one budget")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise DomainError(
                    f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}"
                )
        if any(t < 1 for t in self.budgets):
            raise DomainError("budgets must be positive")


@dataclass
class ExperimentRecord:
    """One cell outcome: a single run at one budget and repetition."""

    game: str
    algorithm: str
    budget: int
    rep: int
    sq_errors: np.ndarray
    mse: float
    spent: int
    wall_time: float


@dataclass
class AggregateRow:
    game: str
    algorithm: str
    budget: int
    mean_mse: float
    stderr: float
    reps: int


@dataclass
class ExperimentResults:
    records: list[ExperimentRecord]
    aggregates: list[AggregateRow]
    skipped: list[tuple[str, int, str]] = field(default_factory=list)

    def mean_mse(self, algorithm: str, budget: int) -> float:
        for row in self.aggregates:
            if row.algorithm == algorithm and row.budget == budget:
                return row.mean_mse
        raise KeyError((algorithm, budget))


def run_experiment(cfg: ExperimentConfig, game: Game | None = None) -> ExperimentResults:
    """Execute the full grid and (optionally) write the two CSV files.

    Cells whose budget is below the algorithm's minimum for this game are
    skipped and recorded instead of failing the whole grid. The rep-level
    MSE is the squared error averaged over players; the aggregate is its
    mean over repetitions with the standard error of that mean.
    """
    owned = game is None
    if game is None:
        game = parse_game_spec(cfg.game)
    try:
        return _run_grid(cfg, game)
    finally:
        if owned and isinstance(game, BridgeGame):
            game.close()


def _run_grid(cfg: ExperimentConfig, game: Game) -> ExperimentResults:
    reference = reference_shapley(game)

    records: list[ExperimentRecord] = []
    aggregates: list[AggregateRow] = []
    skipped: list[tuple[str, int, str]] = []
    for algorithm in cfg.algorithms:
        runner, min_budget = ALGORITHMS[algorithm]
        for budget in cfg.budgets:
            floor = min_budget(game.n)
            if budget < floor:
                skipped.append(
                    (algorithm, budget, f"budget below the minimum of {floor}")
                )
                continue
            rep_mses = []
            for rep in range(cfg.repetitions):
                seed = derive_seed(cfg.master_seed, cfg.game, algorithm, budget, rep)
                metered = BudgetedGame(game, limit=budget)
                started = time.perf_counter()
                estimate = runner(metered, budget, seed)
                elapsed = time.perf_counter() - started
                sq = (np.asarray(estimate) - reference) ** 2
                mse = float(sq.mean())
                rep_mses.append(mse)
                records.append(
                    ExperimentRecord(
                        cfg.game, algorithm, budget, rep, sq, mse, metered.spent, elapsed
                    )
                )
            mean = float(np.mean(rep_mses))
            if len(rep_mses) > 1:
                stderr = float(np.std(rep_mses, ddof=1) / math.sqrt(len(rep_mses)))
            else:
                stderr = 0.0
            aggregates.append(
                AggregateRow(cfg.game, algorithm, budget, mean, stderr, len(rep_mses))
            )

    results = ExperimentResults(records, aggregates, skipped)
    if cfg.out_dir is not None:
        write_csv(results, Path(cfg.out_dir))
    return results


def _fmt(value) -> str:
    # Shortest round-tripping decimal for floats, plain str otherwise.
    return repr(float(value)) if isinstance(value, float) else str(value)


def write_csv(results: ExperimentResults, out_dir: Path) -> tuple[Path, Path]:
    """Write ``runs.csv`` and ``aggregate.csv`` (LF endings, header rows)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    runs_path = out_dir / "runs.csv"
    agg_path = out_dir / "aggregate.csv"
    with open(runs_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUNS_HEADER)
        for r in results.records:
            writer.writerow(
                (r.game, r.algorithm, r.budget, r.rep, _fmt(r.mse), r.spent)
            )
    with open(agg_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGGREGATE_HEADER)
        for row in results.aggregates:
            writer.writerow(
                (
                    row.game,
                    row.algorithm,
                    row.budget,
                    _fmt(row.mean_mse),
                    _fmt(row.stderr),
                    row.reps,
                )
            )
    return runs_path, agg_path
