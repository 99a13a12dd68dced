"""Command line: ``kernel run FILE`` and ``kernel eval EXPR --dim N``.

Exit codes: 0 success, 1 failed assertion, 2 parse or type error,
3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .dsl import DslError, evaluate_expression, render_value, run_script, value_json


def _emit(value, n: int, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(value_json(value, n)))
    else:
        print(render_value(value))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kernel", description="Evaluate exterior-algebra scripts.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a script file")
    run.add_argument("file", help="script path, or - for standard input")
    run.add_argument("--format", choices=("text", "json"), default="text")

    ev = sub.add_parser("eval", help="evaluate one expression")
    ev.add_argument("expr")
    ev.add_argument("--dim", type=int, default=3, help="dimension of the space (default 3)")
    ev.add_argument("--format", choices=("text", "json"), default="text")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "eval":
        try:
            value = evaluate_expression(args.expr, args.dim)
        except DslError as exc:
            print(exc, file=sys.stderr)
            return exc.exit_code
        _emit(value, args.dim, args.format)
        return 0

    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    res = run_script(text)
    for value, n in res.outputs:
        _emit(value, n, args.format)
    for msg in res.failures:
        print(msg, file=sys.stderr)
    if res.error is not None:
        print(res.error, file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
