import csv
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from svarm import (
    AirportGame,
    DomainError,
    ExperimentConfig,
    FunctionGame,
    NoReference,
    ShoeGame,
    SougGame,
    TableGame,
    closed_form_shapley,
    run_experiment,
)
from svarm.harness import ALGORITHMS, parse_game_spec, reference_shapley, write_csv

STUB = Path(__file__).parent / "bridge_stub.py"


class TestGameSpecs:
    def test_shoe(self):
        game = parse_game_spec("shoe:n=8")
        assert isinstance(game, ShoeGame) and game.n == 8

    def test_airport_default_and_sized(self):
        assert parse_game_spec("airport").n == 100
        assert parse_game_spec("airport:n=12").n == 12

    def test_soug_is_seeded(self):
        a = parse_game_spec("soug:n=10,m=50,seed=7")
        b = parse_game_spec("soug:n=10,m=50,seed=7")
        assert isinstance(a, SougGame)
        assert a.member_sets == b.member_sets

    def test_table(self, tmp_path):
        from svarm import save_table_game

        path = tmp_path / "g.tbl"
        save_table_game(ShoeGame(4), path)
        game = parse_game_spec(f"table:{path}")
        assert isinstance(game, TableGame) and game.n == 4

    def test_bridge(self):
        game = parse_game_spec(f'bridge:cmd="{sys.executable} {STUB} --n 4"')
        try:
            assert game.n == 4
        finally:
            game.close()

    def test_rejects_unknown(self):
        with pytest.raises(DomainError):
            parse_game_spec("poker:n=5")
        with pytest.raises(DomainError):
            parse_game_spec("shoe:n=8,oops")


class TestReference:
    def test_closed_forms_preferred(self):
        np.testing.assert_array_equal(
            reference_shapley(ShoeGame(50)), closed_form_shapley(ShoeGame(50))
        )

    def test_enumeration_fallback(self):
        game = TableGame([0.0, 1.0, 2.0, 4.0])
        assert reference_shapley(game).shape == (2,)

    def test_no_reference_for_large_black_boxes(self):
        with pytest.raises(NoReference):
            reference_shapley(FunctionGame(30, lambda s: 0.0))


class TestConfigValidation:
    def test_unknown_algorithm(self):
        with pytest.raises(DomainError):
            ExperimentConfig("shoe:n=8", ("sgd",), (100,))

    def test_bad_reps_and_budgets(self):
        with pytest.raises(DomainError):
            ExperimentConfig("shoe:n=8", ("svarm",), (100,), repetitions=0)
        with pytest.raises(DomainError):
            ExperimentConfig("shoe:n=8", ("svarm",), ())
        with pytest.raises(DomainError):
            ExperimentConfig("shoe:n=8", ("svarm",), (0,))


class TestRunExperiment:
    def test_exact_oracle_has_zero_error(self):
        game = TableGame([0.0, 1.0, 0.5, 3.0])
        cfg = ExperimentConfig("table:mem", ("exact",), (3,), repetitions=2)
        results = run_experiment(cfg, game=game)
        assert all(r.mse == 0.0 for r in results.records)
        assert all(r.spent == 3 for r in results.records)

    def test_below_minimum_budgets_become_skips(self, soug6):
        game, _ = soug6
        cfg = ExperimentConfig(
            "soug:mem", ("svarm", "approshapley"), (6, 60), repetitions=2
        )
        results = run_experiment(cfg, game=game)
        skipped = {(algo, t) for algo, t, _ in results.skipped}
        assert ("svarm", 6) in skipped
        assert ("approshapley", 6) in skipped
        assert {(r.algorithm, r.budget) for r in results.records} == {
            ("svarm", 60),
            ("approshapley", 60),
        }

    def test_rep_mse_and_aggregate_math(self, soug6, tmp_path):
        game, exact = soug6
        cfg = ExperimentConfig(
            "soug:mem", ("svarm",), (60,), repetitions=5, out_dir=tmp_path
        )
        results = run_experiment(cfg, game=game)
        mses = [r.mse for r in results.records]
        # Per-rep MSE is the player-average squared error.
        for record in results.records:
            assert record.mse == pytest.approx(record.sq_errors.mean(), rel=1e-15)
        agg = results.aggregates[0]
        assert agg.mean_mse == pytest.approx(np.mean(mses), rel=1e-12)
        assert agg.stderr == pytest.approx(np.std(mses, ddof=1) / np.sqrt(5), rel=1e-12)
        assert agg.reps == 5

    def test_powerset_budget_drives_mse_to_zero(self):
        # The no-replacement variant sees the whole 10-player powerset at
        # T=1024, so every repetition lands on the exact values.
        cfg = ExperimentConfig(
            "shoe:n=10", ("s-svarm-plus",), (1024,), repetitions=10, master_seed=1
        )
        results = run_experiment(cfg)
        assert results.aggregates[0].mean_mse < 1e-18

    def test_monotone_trend_svarm(self):
        cfg = ExperimentConfig(
            "soug:n=12,m=50,seed=42",
            ("svarm",),
            (200, 400, 800, 1600),
            repetitions=100,
            master_seed=0,
        )
        results = run_experiment(cfg)
        mses = [row.mean_mse for row in results.aggregates]
        assert all(a > b for a, b in zip(mses, mses[1:]))

    def test_seed_independence_across_cells(self):
        from svarm import derive_seed

        seeds = {
            derive_seed(0, "soug:n=12", algo, t, rep)
            for algo in ALGORITHMS
            for t in (100, 200, 400)
            for rep in range(50)
        }
        assert len(seeds) == len(ALGORITHMS) * 3 * 50

    def test_reproducible_csv(self, soug6, tmp_path):
        game, _ = soug6
        outputs = []
        for sub in ("a", "b"):
            cfg = ExperimentConfig(
                "soug:mem",
                ("svarm", "s-svarm-plus"),
                (30, 60),
                repetitions=3,
                master_seed=9,
                out_dir=tmp_path / sub,
            )
            run_experiment(cfg, game=game)
            outputs.append(
                (
                    (tmp_path / sub / "runs.csv").read_bytes(),
                    (tmp_path / sub / "aggregate.csv").read_bytes(),
                )
            )
        assert outputs[0] == outputs[1]

    def test_csv_shape(self, soug6, tmp_path):
        game, _ = soug6
        cfg = ExperimentConfig(
            "soug:mem", ("approshapley",), (20,), repetitions=2, out_dir=tmp_path
        )
        run_experiment(cfg, game=game)
        runs = (tmp_path / "runs.csv").read_text().splitlines()
        assert runs[0] == "game,algo,T,rep,mse,spent"
        assert len(runs) == 3
        agg = (tmp_path / "aggregate.csv").read_text().splitlines()
        assert agg[0] == "game,algo,T,mean_mse,stderr,reps"
        # Floats round-trip exactly through the shortest-decimal encoding.
        row = runs[1].split(",")
        assert repr(float(row[4])) == row[4]
        raw = (tmp_path / "runs.csv").read_bytes()
        assert b"\r" not in raw


class TestCli:
    def run_cli(self, tmp_path, sub):
        out = tmp_path / sub
        cmd = [
            sys.executable,
            "-m",
            "svarm.cli",
            "--game",
            "shoe:n=8",
            "--algos",
            "svarm,approshapley",
            "--budgets",
            "40,80",
            "--reps",
            "3",
            "--seed",
            "5",
            "--out",
            str(out),
        ]
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, proc.stderr
        return out

    def test_cli_writes_and_reports(self, tmp_path):
        out = self.run_cli(tmp_path, "x")
        assert (out / "runs.csv").exists() and (out / "aggregate.csv").exists()
        with open(out / "runs.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2 * 2 * 3
        assert {r["algo"] for r in rows} == {"svarm", "approshapley"}
