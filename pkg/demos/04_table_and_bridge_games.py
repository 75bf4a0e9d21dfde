"""Replaying games from worth tables and talking to external value functions.

Run with:  python demos/04_table_and_bridge_games.py
(The bridge section needs the companion plugin installed: `pip install -e plugin/`.)
"""

import shutil
import sys
from pathlib import Path

import numpy as np

from svarm import (
    BridgeGame,
    ShoeGame,
    exact_shapley,
    load_table_game,
    save_table_game,
    svarm_run,
)

# --- Worth tables ---------------------------------------------------------
# Any game with a modest player count can be dumped to a text table (one
# hex bitmask and one shortest-round-trip float per line) and replayed
# later, e.g. cached evaluations of an expensive model-explanation game.
path = Path("results") / "shoe8.tbl"
path.parent.mkdir(exist_ok=True)
save_table_game(ShoeGame(8), path)
print(f"wrote {path} ({path.stat().st_size} bytes)")

replay = load_table_game(path)
print("table replay matches the original:",
      np.array_equal(exact_shapley(replay), exact_shapley(ShoeGame(8))))

# --- Bridge games ----------------------------------------------------------
# A value function living in another process (say, wrapping a model) is
# reachable over newline-delimited JSON. The companion plugin ships a
# reference server; any process speaking the same protocol works.
if shutil.which("valuefn-plugin") is None:
    print("\nbridge demo skipped: install the plugin first (pip install -e plugin/)")
    sys.exit(0)

with BridgeGame.spawn("valuefn-plugin shoe --players 8") as bridge:
    print(f"\nhandshake: the peer serves an n={bridge.n} game")
    estimate = svarm_run(bridge, 200, seed=9)
    native = svarm_run(ShoeGame(8), 200, seed=9)
    print("bridge run equals the in-process run:", np.array_equal(estimate, native))
