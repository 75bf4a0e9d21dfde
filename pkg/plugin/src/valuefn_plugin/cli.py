"""Command line: pick a value function and serve it.

  valuefn-plugin shoe --players 8
  valuefn-plugin table games/shoe8.tbl
  valuefn-plugin stub --players 14
  valuefn-plugin shoe --players 8 --tcp 5533

stdio is the default transport; ``--tcp PORT`` listens instead (port 0
picks a free one, announced on stderr).
"""

from __future__ import annotations

import argparse

from .server import serve
from .values import model_stub_value, shoe_value, table_value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valuefn-plugin", description=__doc__)
    sub = parser.add_subparsers(dest="kind", required=True)

    shoe = sub.add_parser("shoe", help="left/right shoe matching game")
    shoe.add_argument("--players", type=int, default=8)

    table = sub.add_parser("table", help="replay a dense worth table")
    table.add_argument("path")

    stub = sub.add_parser("stub", help="placeholder for a model-backed value function")
    stub.add_argument("--players", type=int, default=14)

    for p in (shoe, table, stub):
        p.add_argument("--tcp", type=int, default=None, metavar="PORT")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.kind == "shoe":
        value_fn, n = shoe_value(args.players)
    elif args.kind == "table":
        value_fn, n = table_value(args.path)
    else:
        value_fn, n = model_stub_value(args.players)
    if args.tcp is None:
        serve(value_fn, n, "stdio")
    else:
        serve(value_fn, n, "tcp", port=args.tcp)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
