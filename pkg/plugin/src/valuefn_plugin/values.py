"""Example value functions: the shoe game, a table replayer, and a model stub.

All of them map a sorted list of 0-based player indices to a real worth,
with the empty list worth 0. They are written against the wire protocol
alone, independent of any particular client library.
"""

from __future__ import annotations

from pathlib import Path


def shoe_value(n: int):
    """Left/right shoe matching over two equal halves of ``n`` players."""
    if n < 2 or n % 2:
        raise ValueError(f"shoe game needs an even n >= 2, got {n}")
    half = n // 2

    def value(players: list[int]) -> float:
        left = sum(1 for p in players if p < half)
        return float(min(left, len(players) - left))

    return value, n


def table_value(path: str | Path):
    """Replay a dense worth table (``n=<int>`` header, then ``<hex> <float>`` lines)."""
    n = None
    worths: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if n is None:
                if not line.startswith("n="):
                    raise ValueError(f"{path}:{lineno}: expected 'n=<int>'")
                n = int(line[2:])
                continue
            mask_text, worth_text = line.split()
            if int(mask_text, 16) != len(worths):
                raise ValueError(f"{path}:{lineno}: table rows out of order")
            worths.append(float(worth_text))
    if n is None or len(worths) != 1 << n:
        raise ValueError(f"{path}: table does not cover all 2^n coalitions")
    if worths[0] != 0.0:
        raise ValueError(f"{path}: empty coalition must be worth 0")

    def value(players: list[int]) -> float:
        mask = 0
        for p in players:
            mask |= 1 << p
        return worths[mask]

    return value, n


def model_stub_value(n: int):
    """Where a real model call would go.

    A deployment would load its model once here and have ``value`` run one
    prediction per coalition (mask out the absent players, return the
    score). The stub just returns the coalition fraction so the plumbing
    can be exercised end to end.
    """

    def value(players: list[int]) -> float:
        # model.predict(features masked to `players`) goes here
        return len(players) / n

    return value, n
