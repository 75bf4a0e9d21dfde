"""Coalitions, the game abstraction, and budget metering.

Players are indexed 0..n-1 internally; any 1-based numbering is purely an
I/O convention. A cooperative game assigns every coalition (subset of the
player set) a real worth, with the empty coalition worth exactly 0. All
approximation algorithms in this package consume games through
:class:`BudgetedGame`, which counts paid evaluations: every call with a
nonempty coalition costs one unit, the empty coalition is free.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetExhausted, DimensionMismatch, DomainError

#: Hard cap on the player count; a Python int bitmask handles any width,
#: but everything here is desk-scale (the largest stock game has n=100).
MAX_PLAYERS = 128

#: Shapley estimates are plain float arrays of length n.
ShapleyVector = np.ndarray


@dataclass(frozen=True, slots=True)
class Coalition:
    """A subset of the players ``{0, ..., n-1}`` stored as a bitmask.

    Bit ``i`` is set iff player ``i`` is a member. Instances are immutable
    and hashable; every operation returns a new coalition. The classmethod
    constructors validate their input. The raw ``Coalition(bits, n)`` form
    is the hot-path constructor and trusts the caller to pass a mask with
    no bits at index >= n.
    """

    bits: int
    n: int

    @classmethod
    def empty(cls, n: int) -> "Coalition":
        _check_width(n)
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "Coalition":
        _check_width(n)
        return cls((1 << n) - 1, n)

    @classmethod
    def from_players(cls, players: Iterable[int], n: int) -> "Coalition":
        _check_width(n)
        bits = 0
        for p in players:
            if not 0 <= p < n:
                raise DomainError(f"player {p} outside 0..{n - 1}")
            bits |= 1 << p
        return cls(bits, n)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, player: int) -> bool:
        return (self.bits >> player) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            lsb = bits & -bits
            yield lsb.bit_length() - 1
            bits ^= lsb

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def add(self, player: int) -> "Coalition":
        """New coalition with ``player`` included."""
        return Coalition(self.bits | (1 << player), self.n)

    def remove(self, player: int) -> "Coalition":
        """New coalition with ``player`` excluded."""
        return Coalition(self.bits & ~(1 << player), self.n)

    def union(self, other: "Coalition") -> "Coalition":
        return Coalition(self.bits | other.bits, self.n)

    def intersection(self, other: "Coalition") -> "Coalition":
        return Coalition(self.bits & other.bits, self.n)

    def complement(self) -> "Coalition":
        """The remaining players, i.e. the complement within ``{0..n-1}``."""
        return Coalition(((1 << self.n) - 1) ^ self.bits, self.n)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Coalition({{{','.join(map(str, self))}}}, n={self.n})"


def _check_width(n: int) -> None:
    if not 1 <= n <= MAX_PLAYERS:
        raise DomainError(f"player count must be in 1..{MAX_PLAYERS}, got {n}")


class Game(ABC):
    """A cooperative game: a player count ``n`` and a worth per coalition.

    Implementations must be pure (repeated calls with the same coalition
    return the same value) and must assign the empty coalition worth 0.
    They may assume the coalition width matches ``self.n``; the metered
    wrapper enforces it.
    """

    n: int

    @abstractmethod
    def value(self, coalition: Coalition) -> float:
        """Worth of ``coalition``."""


class FunctionGame(Game):
    """Adapter turning a plain callable over coalitions into a game."""

    def __init__(self, n: int, fn):
        _check_width(n)
        self.n = n
        self._fn = fn

    def value(self, coalition: Coalition) -> float:
        if coalition.bits == 0:
            return 0.0
        return float(self._fn(coalition))


class BudgetedGame(Game):
    """Evaluation-counting wrapper around a game.

    ``spent`` increments by exactly one per call with a nonempty coalition;
    the empty coalition returns 0 for free. With ``limit`` set, a paid call
    at ``spent == limit`` raises :class:`BudgetExhausted` instead of
    evaluating. Single-owner mutable state: never share one instance
    across concurrent runs.
    """

    def __init__(self, inner: Game, limit: int | None = None):
        if limit is not None and limit < 0:
            raise DomainError("budget limit must be nonnegative")
        self.inner = inner
        self.n = inner.n
        self.limit = limit
        self.spent = 0

    def value(self, coalition: Coalition) -> float:
        if coalition.n != self.n:
            raise DimensionMismatch(
                f"coalition width {coalition.n} != game width {self.n}"
            )
        if coalition.bits == 0:
            return 0.0
        if self.limit is not None and self.spent >= self.limit:
            raise BudgetExhausted(f"budget of {self.limit} evaluations is spent")
        v = self.inner.value(coalition)
        self.spent += 1
        return v

    @property
    def remaining(self) -> int | None:
        return None if self.limit is None else self.limit - self.spent


def marginal_weight(n: int, s: int) -> float:
    """Weight ``1 / (n * C(n-1, s))`` of one coalition of size ``s``.

    These weights turn the average of a player's marginal contributions
    into two weighted sums over plain coalition worths: each subset S of
    the other players carries weight ``w_S = 1 / (n * C(n-1, |S|))``, and
    summed over all subsets the weights form a probability distribution.
    Exact integer binomials keep this overflow-free for any supported n.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if not 0 <= s <= n - 1:
        raise DomainError(f"size {s} outside 0..{n - 1}")
    return 1.0 / (n * math.comb(n - 1, s))
