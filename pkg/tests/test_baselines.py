import numpy as np
import pytest

from svarm import (
    BudgetTooSmall,
    BudgetedGame,
    Coalition,
    ShoeGame,
    approshapley_run,
    generate_soug,
    make_rng,
)

from conftest import RecordingGame


class TestApproShapley:
    def test_budget_floor(self):
        # One full ordering costs n, but the documented floor is n+1.
        with pytest.raises(BudgetTooSmall):
            approshapley_run(ShoeGame(6), 6, seed=0)

    def test_two_full_permutations(self, soug6):
        game, _ = soug6
        metered = BudgetedGame(game, limit=12)
        _, info = approshapley_run(metered, 12, seed=1, full_output=True)
        assert info.permutations_completed == 2
        assert metered.spent == 12
        assert info.counts == [2] * 6

    def test_prefix_reuse_one_eval_per_prefix(self, soug6):
        game, _ = soug6
        rec = RecordingGame(game)
        metered = BudgetedGame(rec, limit=18)
        approshapley_run(metered, 18, seed=2)
        assert len(rec.trace) == 18
        # Each ordering contributes strictly growing prefixes.
        for start in range(0, 18, 6):
            chunk = rec.trace[start : start + 6]
            assert chunk[-1] == (1 << 6) - 1
            for a, b in zip(chunk, chunk[1:]):
                assert a & b == a and b.bit_count() == a.bit_count() + 1

    def test_telescoping_within_full_permutations(self, soug6):
        game, _ = soug6
        full_worth = game.value(Coalition.full(6))
        _, info = approshapley_run(game, 24, seed=3, full_output=True)
        assert sum(info.sums) == pytest.approx(4 * full_worth, rel=1e-12)

    def test_efficiency_with_complete_permutations(self, soug6):
        # With T a multiple of n every player holds equally many increments,
        # so the estimates sum to the grand worth exactly, run by run.
        game, _ = soug6
        full_worth = game.value(Coalition.full(6))
        for seed in range(5):
            phi = approshapley_run(game, 60, seed=seed)
            assert phi.sum() == pytest.approx(full_worth, rel=1e-12)

    def test_mid_permutation_truncation(self, soug6):
        game, _ = soug6
        metered = BudgetedGame(game, limit=9)
        _, info = approshapley_run(metered, 9, seed=4, full_output=True)
        assert metered.spent == 9
        assert info.permutations_completed == 1
        assert sorted(info.counts) == [1, 1, 1, 2, 2, 2]

    def test_deterministic(self, soug6):
        game, _ = soug6
        np.testing.assert_array_equal(
            approshapley_run(game, 30, seed=5), approshapley_run(game, 30, seed=5)
        )

    def test_unbiased_smoke(self, soug6):
        game, exact = soug6
        runs = np.array([approshapley_run(game, 60, seed=7000 + r) for r in range(2000)])
        se = runs.std(axis=0, ddof=1) / np.sqrt(runs.shape[0])
        assert np.all(np.abs(runs.mean(axis=0) - exact) <= 4 * se)
