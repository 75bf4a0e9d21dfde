"""Tour of the stock games and the brute-force oracles.

Run with:  python demos/01_games_and_exact_values.py
"""

import numpy as np

from svarm import (
    AirportGame,
    Coalition,
    ShoeGame,
    closed_form_shapley,
    diagnostics,
    exact_shapley,
    exact_strata,
    generate_soug,
    make_rng,
)

# --- The shoe game: two halves of matching shoes -------------------------
# Worth of a coalition = number of complete left/right pairs it holds.
shoe = ShoeGame(6)
print("shoe n=6, value of {0,1,5}:", shoe.value(Coalition.from_players([0, 1, 5], 6)))

# Every player is interchangeable, so each one's Shapley value is 1/2,
# and the brute-force enumeration agrees with the closed form.
print("closed form:", closed_form_shapley(shoe))
print("enumeration:", exact_shapley(shoe))

# --- The airport game ----------------------------------------------------
# A coalition is worth its largest member weight (think: the longest
# runway anyone in the group needs). The stock profile has 100 players in
# ten weight blocks; any prefix of it is a valid smaller game.
airport = AirportGame(12)
print("\nairport n=12 closed form:", np.round(closed_form_shapley(airport), 6))
print("matches enumeration:",
      np.allclose(closed_form_shapley(airport), exact_shapley(airport), atol=1e-12))

# --- Random sum-of-unanimity games ---------------------------------------
# Dense in the space of all cooperative games and still closed form:
# each member set splits its coefficient evenly among its members.
soug = generate_soug(make_rng(7), 10, 50)
print("\nsoug n=10 closed form:", np.round(closed_form_shapley(soug), 4))

# --- Per-size strata -----------------------------------------------------
# The Shapley value of player i is also the average, over sizes, of the
# mean worth including i minus the mean worth excluding i. These strata
# (and their spreads) are what the stratified estimators exploit.
plus, minus = exact_strata(soug)
reconstructed = (plus - minus).mean(axis=1)
print("strata reconstruction error:",
      np.abs(reconstructed - closed_form_shapley(soug)).max())

spread = diagnostics(soug)
print("largest per-stratum variance:", spread.var_plus.max().round(4))
print("largest unstratified variance:", spread.var_plus_total.max().round(4),
      "(stratification shrinks what the estimators have to average over)")
