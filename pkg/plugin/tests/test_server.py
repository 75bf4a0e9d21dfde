import json
import subprocess
import sys
import threading

import pytest

from valuefn_plugin import PluginServer, shoe_value, table_value
from valuefn_plugin.values import model_stub_value


def reply_of(server, request) -> dict:
    line = server.handle_line(json.dumps(request))
    assert line is not None
    return json.loads(line)


class TestRequestHandling:
    def test_handshake(self):
        server = PluginServer(*model_stub_value(14))
        assert reply_of(server, {"op": "hello"}) == {"op": "hello", "n": 14}

    def test_eval_roundtrip(self):
        server = PluginServer(*shoe_value(6))
        reply = reply_of(server, {"op": "eval", "id": 5, "players": [0, 3]})
        assert reply == {"op": "eval", "id": 5, "value": 1.0}

    def test_empty_coalition_is_zero(self):
        # The client may short-circuit this locally, but the server must
        # still answer it correctly.
        server = PluginServer(*shoe_value(6))
        reply = reply_of(server, {"op": "eval", "id": 1, "players": []})
        assert reply == {"op": "eval", "id": 1, "value": 0.0}

    def test_unknown_fields_ignored(self):
        server = PluginServer(*shoe_value(6))
        reply = reply_of(server, {"op": "eval", "id": 2, "players": [0], "hint": "x"})
        assert reply["value"] == 0.0 and reply["id"] == 2

    def test_malformed_requests_get_error_and_loop_survives(self):
        server = PluginServer(*shoe_value(6))
        for bad in ("{broken", '{"op":"warp"}', '{"op":"eval","players":[0]}'):
            reply = json.loads(server.handle_line(bad))
            assert reply["op"] == "error"
        # Still serving afterwards.
        assert reply_of(server, {"op": "hello"})["n"] == 6

    def test_invalid_players_rejected_with_id(self):
        server = PluginServer(*shoe_value(6))
        for players in ([6], [-1], [0, 0], ["a"]):
            reply = reply_of(server, {"op": "eval", "id": 9, "players": players})
            assert reply["op"] == "error"

    def test_bye_and_blank_lines_produce_no_reply(self):
        server = PluginServer(*shoe_value(6))
        assert server.handle_line('{"op":"bye"}') is None
        assert server.handle_line("   ") is None


class TestValueFunctions:
    def test_shoe_matches_pairs(self):
        value, n = shoe_value(8)
        assert n == 8
        assert value([0, 1, 4]) == 1.0
        assert value(list(range(8))) == 4.0

    def test_shoe_rejects_odd(self):
        with pytest.raises(ValueError):
            shoe_value(5)

    def test_table_replayer(self, tmp_path):
        path = tmp_path / "t.tbl"
        path.write_text("# tiny game\nn=2\n0 0.0\n1 0.25\n2 0.5\n3 1.0\n")
        value, n = table_value(path)
        assert n == 2
        assert value([]) == 0.0 and value([0]) == 0.25 and value([0, 1]) == 1.0

    def test_table_validation(self, tmp_path):
        path = tmp_path / "bad.tbl"
        path.write_text("n=1\n0 0.5\n1 1.0\n")
        with pytest.raises(ValueError):
            table_value(path)

    def test_stub_counts_presence(self):
        value, n = model_stub_value(10)
        assert value([1, 2]) == pytest.approx(0.2)


class TestTransports:
    def test_stdio_subprocess(self):
        proc = subprocess.Popen(
            [sys.executable, "-m", "valuefn_plugin.cli", "shoe", "--players", "4"],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        try:
            proc.stdin.write('{"op":"hello"}\n')
            proc.stdin.flush()
            assert json.loads(proc.stdout.readline()) == {"op": "hello", "n": 4}
            proc.stdin.write('{"op":"eval","id":0,"players":[0,2]}\n')
            proc.stdin.flush()
            assert json.loads(proc.stdout.readline())["value"] == 1.0
            proc.stdin.write('{"op":"bye"}\n')
            proc.stdin.flush()
            assert proc.wait(timeout=10) == 0
        finally:
            if proc.poll() is None:
                proc.kill()

    def test_tcp_single_client(self):
        import socket

        server = PluginServer(*shoe_value(6))
        ready = threading.Event()
        port_box = {}

        def announce(port):
            port_box["port"] = port
            ready.set()

        thread = threading.Thread(
            target=server.serve_tcp, kwargs={"on_listen": announce}, daemon=True
        )
        thread.start()
        assert ready.wait(timeout=10)
        with socket.create_connection(("127.0.0.1", port_box["port"])) as sock:
            fh = sock.makefile("rw", encoding="utf-8", newline="\n")
            fh.write('{"op":"hello"}\n')
            fh.flush()
            assert json.loads(fh.readline())["n"] == 6
            fh.write('{"op":"eval","id":3,"players":[1,5]}\n')
            fh.flush()
            assert json.loads(fh.readline()) == {"op": "eval", "id": 3, "value": 1.0}
            fh.write('{"op":"bye"}\n')
            fh.flush()
        thread.join(timeout=10)
        assert not thread.is_alive()

    def test_tcp_bridge_client(self):
        # The long-lived-server transport, driven through the client library.
        from svarm import BridgeGame, Coalition

        server = PluginServer(*shoe_value(8))
        ready = threading.Event()
        port_box = {}

        def announce(port):
            port_box["port"] = port
            ready.set()

        thread = threading.Thread(
            target=server.serve_tcp, kwargs={"on_listen": announce}, daemon=True
        )
        thread.start()
        assert ready.wait(timeout=10)
        with BridgeGame.connect("127.0.0.1", port_box["port"]) as bridge:
            assert bridge.n == 8
            assert bridge.value(Coalition.from_players([0, 4], 8)) == 1.0
        thread.join(timeout=10)
        assert not thread.is_alive()
