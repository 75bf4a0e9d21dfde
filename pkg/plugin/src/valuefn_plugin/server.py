"""Bridge-protocol server: serve one value function to one client.

The protocol is newline-delimited JSON over stdio or TCP. The client
opens with ``{"op":"hello"}`` and gets ``{"op":"hello","n":<int>}`` back;
each ``{"op":"eval","id":<int>,"players":[<0-based indices>]}`` is
answered by ``{"op":"eval","id":<int>,"value":<float>}`` with the same
id, exactly once, in request order; ``{"op":"bye"}`` ends the session.
Unknown fields in requests are ignored. A request the server cannot make
sense of gets ``{"op":"error","id":...,"msg":...}`` and the loop
continues, so one bad message never kills a long-running session.
"""

from __future__ import annotations

import json
import socket
import sys
from typing import Callable

ValueFn = Callable[[list[int]], float]


class PluginServer:
    """Single-client request loop around one registered value function."""

    def __init__(self, value_fn: ValueFn, n: int):
        if n < 1:
            raise ValueError(f"need at least one player, got {n}")
        self.value_fn = value_fn
        self.n = n

    def handle_line(self, line: str) -> str | None:
        """One request in, one reply out (None for bye/blank lines)."""
        line = line.strip()
        if not line:
            return None
        try:
            request = json.loads(line)
        except json.JSONDecodeError:
            return self._error(None, "request is not valid JSON")
        if not isinstance(request, dict):
            return self._error(None, "request is not an object")
        op = request.get("op")
        if op == "hello":
            return json.dumps({"op": "hello", "n": self.n})
        if op == "bye":
            return None
        if op == "eval":
            return self._handle_eval(request)
        return self._error(request.get("id"), f"unknown op {op!r}")

    def _handle_eval(self, request: dict) -> str:
        request_id = request.get("id")
        if not isinstance(request_id, int) or isinstance(request_id, bool):
            return self._error(None, "eval needs an integer id")
        players = request.get("players")
        if not isinstance(players, list) or not all(
            isinstance(p, int) and not isinstance(p, bool) and 0 <= p < self.n
            for p in players
        ):
            return self._error(request_id, f"players must be indices in 0..{self.n - 1}")
        if len(set(players)) != len(players):
            return self._error(request_id, "players must be distinct")
        worth = 0.0 if not players else float(self.value_fn(sorted(players)))
        return json.dumps({"op": "eval", "id": request_id, "value": worth})

    @staticmethod
    def _error(request_id, msg: str) -> str:
        return json.dumps({"op": "error", "id": request_id, "msg": msg})

    def serve_stdio(self, stdin=None, stdout=None) -> None:
        """Blocking request loop over text streams (default: this process's stdio)."""
        stdin = sys.stdin if stdin is None else stdin
        stdout = sys.stdout if stdout is None else stdout
        for line in stdin:
            reply = self.handle_line(line)
            if reply is None:
                if _is_bye(line):
                    break
                continue
            stdout.write(reply + "\n")
            stdout.flush()

    def serve_tcp(self, host: str = "127.0.0.1", port: int = 0, on_listen=None) -> None:
        """Accept one TCP client, serve it, then return. Port 0 picks a free port,
        announced on stderr (and to ``on_listen``, for embedding in tests)."""
        with socket.create_server((host, port)) as server:
            actual = server.getsockname()[1]
            if on_listen is not None:
                on_listen(actual)
            print(f"listening on {actual}", file=sys.stderr, flush=True)
            conn, _ = server.accept()
            with conn:
                reader = conn.makefile("r", encoding="utf-8", newline="\n")
                writer = conn.makefile("w", encoding="utf-8", newline="\n")
                for line in reader:
                    reply = self.handle_line(line)
                    if reply is None:
                        if _is_bye(line):
                            break
                        continue
                    writer.write(reply + "\n")
                    writer.flush()


def _is_bye(line: str) -> bool:
    line = line.strip()
    if not line:
        return False
    try:
        return json.loads(line).get("op") == "bye"
    except (json.JSONDecodeError, AttributeError):
        return False


def serve(value_fn: ValueFn, n: int, transport: str = "stdio", **kw) -> None:
    """Serve ``value_fn`` over ``transport`` ("stdio" or "tcp")."""
    server = PluginServer(value_fn, n)
    if transport == "stdio":
        server.serve_stdio()
    elif transport == "tcp":
        server.serve_tcp(**kw)
    else:
        raise ValueError(f"unknown transport {transport!r}")
