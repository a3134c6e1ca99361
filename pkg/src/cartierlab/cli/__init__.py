"""``cartier-lab`` command line: run or check session files."""

import argparse
import sys

from .commands import Caps, render_text, run_command, run_session, to_json
from .session import COMMANDS, Session, SessionError, format_session, parse_session

EXIT_OK, EXIT_COMMAND, EXIT_PARSE = 0, 1, 2


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return None
    try:
        return parse_session(text)
    except SessionError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return None


def build_parser():
    parser = argparse.ArgumentParser(prog="cartier-lab", description="Cartier module computations on session files.")
    sub = parser.add_subparsers(dest="action", required=True)
    run = sub.add_parser("run", help="parse a session and execute its commands")
    run.add_argument("file")
    run.add_argument("--json", action="store_true", help="one JSON document per command")
    run.add_argument("--chain-cap", type=int, default=Caps.chain, metavar="N")
    run.add_argument("--power-cap", type=int, default=Caps.power, metavar="N")
    run.add_argument("--timing", action="store_true", help="add wall-clock seconds to each report")
    check = sub.add_parser("check", help="parse and validate only")
    check.add_argument("file")
    fmt = sub.add_parser("format", help="print the session in canonical form")
    fmt.add_argument("file")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    session = _load(args.file)
    if session is None:
        return EXIT_PARSE
    if args.action == "check":
        ndecl = len(session.declarations) - len(session.commands)
        print(f"ok: {ndecl} declarations, {len(session.commands)} commands")
        return EXIT_OK
    if args.action == "format":
        sys.stdout.write(format_session(session))
        return EXIT_OK
    if args.chain_cap < 1 or args.power_cap < 1:
        print("error: caps must be positive", file=sys.stderr)
        return EXIT_PARSE
    caps = Caps(chain=args.chain_cap, power=args.power_cap)
    status = EXIT_OK
    for command in session.commands:
        report = run_command(session, command, caps, args.timing)
        print(to_json(report) if args.json else render_text(report), flush=True)
        if report["status"] != "ok":
            status = EXIT_COMMAND
    return status


__all__ = [
    "COMMANDS", "Caps", "Session", "SessionError", "build_parser", "format_session", "main",
    "parse_session", "render_text", "run_command", "run_session", "to_json",
]
