"""Stock cooperative games, table-backed games, and the external-process bridge.

The three synthetic games (shoe, airport, sum-of-unanimity) come with
linear-time closed-form Shapley values, which makes them the standard
references for measuring approximation error at player counts where full
enumeration is hopeless. :class:`TableGame` replays a game from a dense
worth table (e.g. a dumped model-explanation game), and :class:`BridgeGame`
talks to an external value-function process over newline-delimited JSON.
"""

from __future__ import annotations

import json
import math
import shlex
import socket
import subprocess
from pathlib import Path

import numpy as np

from .core import MAX_PLAYERS, Coalition, Game, ShapleyVector
from .errors import (
    BridgeProtocolError,
    DomainError,
    NonZeroEmptySet,
    ParseError,
    TooLarge,
    Unsupported,
    ValueMissing,
)
from .exact import STRATA_GUARD
from .sampling import Rng, sample_uniform_subset


class ShoeGame(Game):
    """Left/right shoe matching: worth = number of complete pairs.

    The players split into two equal halves A = {0..n/2-1} and
    B = {n/2..n-1}; a coalition is worth ``min(|S & A|, |S & B|)``.
    Every player's Shapley value is 1/2.
    """

    def __init__(self, n: int):
        if n < 2 or n % 2 != 0:
            raise DomainError(f"shoe game needs an even n >= 2, got {n}")
        if n > MAX_PLAYERS:
            raise DomainError(f"n={n} exceeds the cap of {MAX_PLAYERS}")
        self.n = n
        half = n // 2
        self._a = (1 << half) - 1
        self._b = ((1 << n) - 1) ^ self._a

    def value(self, coalition: Coalition) -> float:
        b = coalition.bits
        return float(min((b & self._a).bit_count(), (b & self._b).bit_count()))


#: Weight profile of the stock 100-player airport game: (block size, weight).
AIRPORT_BLOCKS = (
    (8, 1.0),
    (12, 2.0),
    (6, 3.0),
    (14, 4.0),
    (8, 5.0),
    (9, 6.0),
    (13, 7.0),
    (10, 8.0),
    (10, 9.0),
    (10, 10.0),
)


def _airport_profile(n: int) -> list[float]:
    weights: list[float] = []
    for count, w in AIRPORT_BLOCKS:
        weights.extend([w] * count)
    if n > len(weights):
        raise DomainError(f"stock airport profile covers at most {len(weights)} players")
    return weights[:n]


class AirportGame(Game):
    """Runway-sharing game: a coalition is worth its largest member weight.

    ``AirportGame(n)`` takes the first n players of the stock 100-player
    profile (ten blocks of weights 1..10); ``AirportGame.from_weights``
    accepts an arbitrary positive weight vector.
    """

    def __init__(self, n: int = 100):
        self._init_weights(_airport_profile(n))

    @classmethod
    def from_weights(cls, weights) -> "AirportGame":
        game = cls.__new__(cls)
        game._init_weights([float(w) for w in weights])
        return game

    def _init_weights(self, weights: list[float]) -> None:
        if not weights:
            raise DomainError("need at least one player")
        if len(weights) > MAX_PLAYERS:
            raise DomainError(f"n={len(weights)} exceeds the cap of {MAX_PLAYERS}")
        if any(w <= 0 for w in weights):
            raise DomainError("airport weights must be positive")
        self.n = len(weights)
        self.weights = weights

    def value(self, coalition: Coalition) -> float:
        best = 0.0
        for i in coalition:
            w = self.weights[i]
            if w > best:
                best = w
        return best

    def shapley(self) -> ShapleyVector:
        """Closed form via the telescoping threshold decomposition.

        Sorting the weights ascending, the game is the sum over ranks k of
        (c_(k) - c_(k-1)) times the indicator that the coalition reaches
        rank k or above; each such bump is shared equally by the n-k+1
        players at or above rank k, and ties contribute zero bumps.
        """
        n = self.n
        order = sorted(range(n), key=lambda i: self.weights[i])
        phi = np.zeros(n)
        prev_weight = 0.0
        acc = 0.0
        for rank, player in enumerate(order):
            acc += (self.weights[player] - prev_weight) / (n - rank)
            prev_weight = self.weights[player]
            phi[player] = acc
        return phi


class SougGame(Game):
    """Sum of unanimity games: worth = sum of coefficients of covered member sets.

    Specified by M member sets ``S_m`` (bitmasks) and coefficients
    ``c_m``; a coalition S is worth ``sum_m c_m * [S_m subset of S]``.
    Dense in the space of all cooperative games, with Shapley values
    ``phi_i = sum_{m: i in S_m} c_m / |S_m|``.
    """

    def __init__(self, n: int, member_sets, coefficients):
        if n < 1 or n > MAX_PLAYERS:
            raise DomainError(f"player count must be in 1..{MAX_PLAYERS}, got {n}")
        member_sets = [int(m) for m in member_sets]
        coefficients = [float(c) for c in coefficients]
        if len(member_sets) != len(coefficients) or not member_sets:
            raise DomainError("need matching, nonempty member sets and coefficients")
        full = (1 << n) - 1
        for m in member_sets:
            if m == 0 or m & ~full:
                raise DomainError("member sets must be nonempty subsets of the players")
        self.n = n
        self._pairs = list(zip(member_sets, coefficients))

    @property
    def member_sets(self) -> list[int]:
        return [m for m, _ in self._pairs]

    @property
    def coefficients(self) -> list[float]:
        return [c for _, c in self._pairs]

    def value(self, coalition: Coalition) -> float:
        b = coalition.bits
        total = 0.0
        for mask, coeff in self._pairs:
            if mask & b == mask:
                total += coeff
        return total

    def shapley(self) -> ShapleyVector:
        phi = np.zeros(self.n)
        for mask, coeff in self._pairs:
            share = coeff / mask.bit_count()
            m = mask
            while m:
                lsb = m & -m
                phi[lsb.bit_length() - 1] += share
                m ^= lsb
        return phi


def generate_soug(rng: Rng, n: int, m: int) -> SougGame:
    """A random sum-of-unanimity game with ``m`` terms.

    Each member set gets a size uniform on 1..n and is then uniform of
    that size (duplicates across terms allowed; their coefficients just
    add), and each coefficient is uniform on [0, 1). Deterministic given
    the generator state.
    """
    if m < 1:
        raise DomainError(f"need at least one unanimity term, got {m}")
    sets = []
    coeffs = []
    for _ in range(m):
        size = int(rng.integers(1, n + 1))
        sets.append(sample_uniform_subset(rng, n, size).bits)
        coeffs.append(float(rng.random()))
    return SougGame(n, sets, coeffs)


def closed_form_shapley(game: Game) -> ShapleyVector:
    """Exact Shapley values without evaluating the game, where a closed form exists."""
    if isinstance(game, ShoeGame):
        return np.full(game.n, 0.5)
    if isinstance(game, (AirportGame, SougGame)):
        return game.shapley()
    raise Unsupported(f"no closed-form Shapley values for {type(game).__name__}")


class TableGame(Game):
    """A game backed by a dense worth table indexed by coalition bitmask."""

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1 or values.size < 2 or values.size & (values.size - 1):
            raise DomainError("table length must be a power of two, at least 2")
        if values[0] != 0.0:
            raise NonZeroEmptySet(f"empty coalition worth must be 0, got {values[0]!r}")
        self.n = values.size.bit_length() - 1
        self.values = values

    @classmethod
    def from_game(cls, game: Game, force: bool = False) -> "TableGame":
        """Tabulate ``game`` over its full powerset (2^n - 1 evaluations)."""
        if game.n > STRATA_GUARD and not force:
            raise TooLarge(f"tabulating n={game.n} needs 2^{game.n} entries; pass force=True")
        values = np.zeros(1 << game.n)
        for mask in range(1, 1 << game.n):
            values[mask] = game.value(Coalition(mask, game.n))
        return cls(values)

    def value(self, coalition: Coalition) -> float:
        return float(self.values[coalition.bits])


def save_table_game(game: Game, path) -> None:
    """Write a game's dense worth table.

    Format: first line ``n=<int>``, then exactly 2^n lines
    ``<bitmask-hex> <float>`` in ascending bitmask order, UTF-8 with LF
    endings; ``#`` lines are comments. Floats use the shortest
    round-tripping decimal, so save -> load is bit-exact.
    """
    table = game if isinstance(game, TableGame) else TableGame.from_game(game)
    lines = [f"n={table.n}"]
    for mask in range(1 << table.n):
        lines.append(f"{mask:x} {float(table.values[mask])!r}")
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def load_table_game(path) -> TableGame:
    """Read a table written by :func:`save_table_game` (bit-exact round trip)."""
    n = None
    values = None
    expected = 0
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if n is None:
                if not line.startswith("n="):
                    raise ParseError(f"expected 'n=<int>', got {line!r}", lineno)
                try:
                    n = int(line[2:])
                except ValueError:
                    raise ParseError(f"bad player count {line[2:]!r}", lineno) from None
                if not 1 <= n <= MAX_PLAYERS:
                    raise ParseError(f"player count {n} outside 1..{MAX_PLAYERS}", lineno)
                values = np.zeros(1 << n)
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected '<hex> <float>', got {line!r}", lineno)
            try:
                mask = int(parts[0], 16)
                worth = float(parts[1])
            except ValueError:
                raise ParseError(f"unparseable entry {line!r}", lineno) from None
            if mask != expected:
                raise ValueMissing(
                    f"expected bitmask {expected:x}, got {mask:x}", lineno
                )
            values[mask] = worth
            expected += 1
    if n is None:
        raise ParseError("empty table file", None)
    if expected != 1 << n:
        raise ValueMissing(f"table covers {expected} of {1 << n} coalitions", None)
    if values[0] != 0.0:
        raise NonZeroEmptySet(f"empty coalition worth must be 0, got {values[0]!r}")
    return TableGame(values)


class BridgeGame(Game):
    """Client for an external value function speaking the bridge protocol.

    Newline-delimited JSON over stdio (a spawned subprocess) or TCP.
    Handshake: send ``{"op":"hello"}``, the peer answers
    ``{"op":"hello","n":<int>}``. Evaluation: ``{"op":"eval","id":<int>,
    "players":[ascending 0-based indices]}`` answered by ``{"op":"eval",
    "id":<int>,"value":<float>}``. ``{"op":"bye"}`` shuts the peer down.
    Unknown fields in replies are ignored; anything else (bad JSON, wrong
    op, mismatched id, missing value) raises :class:`BridgeProtocolError`.
    The empty coalition short-circuits locally to 0. Requests are
    serialized per connection; concurrent workers should each open their
    own bridge.
    """

    def __init__(self, send_line, recv_line, close=None):
        self._send = send_line
        self._recv = recv_line
        self._close = close
        self._next_id = 0
        reply = self._roundtrip({"op": "hello"})
        if reply.get("op") != "hello" or not isinstance(reply.get("n"), int):
            raise BridgeProtocolError(f"bad handshake reply: {reply!r}")
        n = reply["n"]
        if not 1 <= n <= MAX_PLAYERS:
            raise BridgeProtocolError(f"peer announced unusable player count {n}")
        self.n = n

    @classmethod
    def spawn(cls, cmd: str | list[str]) -> "BridgeGame":
        """Start ``cmd`` as a subprocess and bridge over its stdio."""
        argv = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
        proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )

        def send(line: str) -> None:
            try:
                proc.stdin.write(line + "\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                raise BridgeProtocolError(f"peer process went away: {exc}") from exc

        def close() -> None:
            try:
                proc.stdin.close()
            except OSError:
                pass
            proc.wait(timeout=10)

        return cls(send, proc.stdout.readline, close)

    @classmethod
    def connect(cls, host: str, port: int) -> "BridgeGame":
        """Bridge over a TCP connection."""
        sock = socket.create_connection((host, port))
        reader = sock.makefile("r", encoding="utf-8", newline="\n")
        writer = sock.makefile("w", encoding="utf-8", newline="\n")

        def send(line: str) -> None:
            writer.write(line + "\n")
            writer.flush()

        def close() -> None:
            reader.close()
            writer.close()
            sock.close()

        return cls(send, reader.readline, close)

    def _roundtrip(self, request: dict) -> dict:
        self._send(json.dumps(request, separators=(",", ":")))
        line = self._recv()
        if not line:
            raise BridgeProtocolError("peer closed the connection")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BridgeProtocolError(f"unparseable reply {line!r}") from exc
        if not isinstance(reply, dict):
            raise BridgeProtocolError(f"reply is not an object: {reply!r}")
        if reply.get("op") == "error":
            raise BridgeProtocolError(f"peer reported: {reply.get('msg')!r}")
        return reply

    def value(self, coalition: Coalition) -> float:
        if coalition.bits == 0:
            return 0.0
        request_id = self._next_id
        self._next_id += 1
        reply = self._roundtrip(
            {"op": "eval", "id": request_id, "players": list(coalition)}
        )
        if reply.get("op") != "eval" or reply.get("id") != request_id:
            raise BridgeProtocolError(
                f"expected eval reply for id {request_id}, got {reply!r}"
            )
        worth = reply.get("value")
        if not isinstance(worth, (int, float)) or isinstance(worth, bool):
            raise BridgeProtocolError(f"non-numeric worth in reply: {reply!r}")
        return float(worth)

    def close(self) -> None:
        try:
            self._send(json.dumps({"op": "bye"}))
        except BridgeProtocolError:
            pass
        if self._close is not None:
            self._close()

    def __enter__(self) -> "BridgeGame":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
