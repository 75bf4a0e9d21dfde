"""Budgeted Shapley value approximation without marginal contributions.

Estimators that spend a fixed budget of value-function evaluations and
update many players' estimates per evaluated coalition, alongside exact
brute-force oracles, the standard synthetic benchmark games, and an
experiment harness for MSE-versus-budget comparisons.
"""

from .baselines import approshapley_run
from .core import BudgetedGame, Coalition, FunctionGame, Game, marginal_weight
from .errors import (
    BridgeProtocolError,
    BudgetExhausted,
    BudgetTooSmall,
    DimensionMismatch,
    DomainError,
    NonZeroEmptySet,
    NoReference,
    ParseError,
    TooLarge,
    Unsupported,
    ValueMissing,
)
from .exact import StrataDiagnostics, diagnostics, exact_shapley, exact_strata
from .games import (
    AirportGame,
    BridgeGame,
    ShoeGame,
    SougGame,
    TableGame,
    closed_form_shapley,
    generate_soug,
    load_table_game,
    save_table_game,
)
from .harness import ExperimentConfig, ExperimentResults, run_experiment
from .sampling import (
    SizeDistribution,
    balanced_size_distribution,
    derive_seed,
    harmonic_number,
    make_rng,
    negative_size_distribution,
    positive_size_distribution,
    sample_negative_coalition,
    sample_permutation,
    sample_positive_coalition,
    sample_uniform_subset,
    sample_weighted_subset,
)
from .signed import SignedEstimates, svarm_run, svarm_warmup
from .stratified import (
    StratumTable,
    exact_calculation,
    minimum_budget,
    stratified_svarm_plus_run,
    stratified_svarm_run,
    warmup_negative,
    warmup_positive,
)

__version__ = "0.1.0"

__all__ = [
    "AirportGame",
    "BridgeGame",
    "BridgeProtocolError",
    "BudgetExhausted",
    "BudgetTooSmall",
    "BudgetedGame",
    "Coalition",
    "DimensionMismatch",
    "DomainError",
    "ExperimentConfig",
    "ExperimentResults",
    "FunctionGame",
    "Game",
    "NoReference",
    "NonZeroEmptySet",
    "ParseError",
    "ShoeGame",
    "SignedEstimates",
    "SizeDistribution",
    "SougGame",
    "StrataDiagnostics",
    "StratumTable",
    "TableGame",
    "TooLarge",
    "Unsupported",
    "ValueMissing",
    "approshapley_run",
    "balanced_size_distribution",
    "closed_form_shapley",
    "derive_seed",
    "diagnostics",
    "exact_calculation",
    "exact_shapley",
    "exact_strata",
    "generate_soug",
    "harmonic_number",
    "load_table_game",
    "make_rng",
    "marginal_weight",
    "minimum_budget",
    "negative_size_distribution",
    "positive_size_distribution",
    "run_experiment",
    "sample_negative_coalition",
    "sample_permutation",
    "sample_positive_coalition",
    "sample_uniform_subset",
    "sample_weighted_subset",
    "save_table_game",
    "stratified_svarm_plus_run",
    "stratified_svarm_run",
    "svarm_run",
    "svarm_warmup",
    "warmup_negative",
    "warmup_positive",
]
