"""Command-line front end: ``mulord eliminate|decide|check-z|fuzz``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, TextIO, Tuple

from .fuzz import run_fuzz
from .qe import TraceStep, eliminate_all
from .semantics import check_addition_definability, decide_with_trace, signsplit
from .syntax import ParseError, UnsupportedConstruct, parse, to_text

EXIT_OK = 0
EXIT_DISCREPANCY = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3


def trace_lines(trace: Sequence[TraceStep]) -> List[str]:
    return [
        json.dumps({"rule": s.rule, "before": to_text(s.before), "after": to_text(s.after)})
        for s in trace
    ]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mulord",
        description="Decide sentences of multiplication and order over the rationals.",
    )
    p.add_argument("command", choices=["eliminate", "decide", "check-z", "fuzz"])
    p.add_argument("--domain", choices=["qpos", "q"], default="qpos")
    p.add_argument("--trace", action="store_true", help="append the rewrite trace as JSON lines")
    p.add_argument("--bound", type=int, default=40, help="range [-N, N] for check-z")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=500)
    src = p.add_mutually_exclusive_group()
    src.add_argument("-f", "--file", help="read the formula from FILE")
    src.add_argument("-e", "--expr", help="formula given inline")
    return p


def run(argv: Sequence[str], stdin: Optional[TextIO] = None) -> Tuple[int, str, str]:
    """Run one command; returns ``(exit status, stdout text, stderr text)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    out: List[str] = []

    if args.command == "check-z":
        if args.bound < 1:
            return EXIT_PARSE, "", "error: --bound must be >= 1\n"
        report = check_addition_definability(args.bound)
        status = EXIT_OK if not report.mismatches else EXIT_DISCREPANCY
        return status, "\n".join(report.lines()) + "\n", ""

    if args.command == "fuzz":
        if args.iters < 1:
            return EXIT_PARSE, "", "error: --iters must be >= 1\n"
        report = run_fuzz(args.seed, args.iters)
        status = EXIT_OK if not report.failures else EXIT_DISCREPANCY
        return status, "\n".join(report.lines()) + "\n", ""

    if args.expr is not None:
        text = args.expr
    elif args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = (stdin or sys.stdin).read()

    try:
        f = parse(text, args.domain)
        if args.command == "eliminate":
            if args.domain == "q":
                f = signsplit(f)
            qf, trace = eliminate_all(f)
            out.append(to_text(qf))
        else:
            verdict, trace = decide_with_trace(f, args.domain)
            out.append("true" if verdict else "false")
    except ParseError as exc:
        return EXIT_PARSE, "", f"parse error: {exc}\n"
    except UnsupportedConstruct as exc:
        return EXIT_UNSUPPORTED, "", f"unsupported: {exc}\n"
    except ValueError as exc:
        return EXIT_PARSE, "", f"error: {exc}\n"

    if args.trace:
        out.extend(trace_lines(trace))
    return EXIT_OK, "\n".join(out) + "\n", ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    status, stdout, stderr = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(stdout)
    sys.stderr.write(stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
