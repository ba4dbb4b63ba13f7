"""Command-line entry point: ``nilcsp {parse|traces|equiv|classify|check-laws|animate|serve}``.

Exit codes: 0 success / property holds; 1 property fails (not equivalent,
law failed); 2 usage or parse error; 3 semantic error (unbound name,
tick under parallel).  The ``NILCSP_SEED`` environment variable overrides
the default ``--seed`` for ``check-laws``; an explicit flag wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .laws import check_all_laws, law_equation, report_to_dict
from .parser import ParseError, SemanticError, parse, parse_expression, render, render_definition
from .semantics import Engine, SemanticsError, Status
from .terms import Definitions, TermError, desugar
from .traces import Trace, concat

__all__ = ["main", "entry"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_SEMANTIC = 3

DEFAULT_PORT = 7420


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(1, 1, f"cannot read {path}: {exc.strerror or exc}")


def _load(path: str):
    source = _read_file(path)
    return parse(source)


def _require_process(defs: Definitions, name: str):
    if name not in defs:
        raise SemanticError(f"unbound process name {name!r}")


def _default_seed() -> int:
    env = os.environ.get("NILCSP_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SemanticError(f"NILCSP_SEED must be an integer, got {env!r}")
    return 42


# ---------------------------------------------------------------------------
# Commands

def cmd_parse(args) -> int:
    source_file = _load(args.file)
    for definition in source_file.definitions:
        print(render_definition(definition))
    if source_file.main is not None:
        print(render(source_file.main))
    return EXIT_OK


def cmd_traces(args) -> int:
    source_file = _load(args.file)
    defs = source_file.definitions
    _require_process(defs, args.process)
    desugared = defs.desugared()
    engine = Engine(desugared)
    trace_set = engine.observable_traces(desugared.body_of(args.process), args.depth)
    ordered = sorted(trace_set.traces, key=lambda t: t.labels())
    if args.json:
        payload = {
            "process": args.process,
            "depth": args.depth,
            "truncated": trace_set.truncated,
            "traces": [t.render() for t in ordered],
        }
        print(json.dumps(payload, indent=2))
    else:
        for trace in ordered:
            print(trace.render())
    return EXIT_OK


def cmd_equiv(args) -> int:
    source_file = _load(args.file)
    defs = source_file.definitions.desugared()
    left = desugar(parse_expression(args.a, defs))
    right = desugar(parse_expression(args.b, defs))
    engine = Engine(defs)
    equal, witness = engine.trace_equiv(left, right, args.depth)
    if equal:
        print(f"equivalent (depth {args.depth})")
        return EXIT_OK
    print(f"NOT equivalent; witness {witness.render()}")
    return EXIT_FAIL


def cmd_classify(args) -> int:
    source_file = _load(args.file)
    defs = source_file.definitions
    _require_process(defs, args.process)
    desugared = defs.desugared()
    engine = Engine(desugared)
    print(engine.classify(desugared.body_of(args.process)).value)
    return EXIT_OK


def cmd_check_laws(args) -> int:
    reports = check_all_laws(args.samples, args.size, args.depth, args.seed)
    if args.json:
        print(json.dumps([report_to_dict(r) for r in reports], indent=2))
    else:
        for report in reports:
            verdict = "pass" if report.passed else "FAIL"
            line = (
                f"{report.law.value:3} {verdict:4} "
                f"({report.instances_checked} instances)  {law_equation(report.law)}"
            )
            print(line)
            for ce in report.counterexamples[:3]:
                where = f" diverges at {ce.witness.render()}" if ce.witness else ""
                print(f"      counterexample: {ce.instantiation}{where}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_animate(args) -> int:
    source_file = _load(args.file)
    defs = source_file.definitions
    _require_process(defs, args.process)
    desugared = defs.desugared()
    engine = Engine(desugared)
    current = desugared.body_of(args.process)
    trace = Trace()

    print(f"animating {args.process}; you are the environment")
    while True:
        status = engine.classify(current)
        offered = sorted(engine.observable_step(current), key=lambda t: t.label.label)
        print(f"trace:  {trace.render()}")
        print(f"status: {status.value}")
        if status is Status.QUIESCENT:
            print("STOPPED (only nil remains)")
            return EXIT_OK
        for i, transition in enumerate(offered, start=1):
            print(f"  {i}) {transition.label.label}")
        try:
            line = input("event number, or q to quit> ").strip()
        except EOFError:
            return EXIT_OK
        if line.lower() == "q":
            return EXIT_OK
        if not line.isdigit() or not 1 <= int(line) <= len(offered):
            print(f"please enter 1..{len(offered)} or q")
            continue
        chosen = offered[int(line) - 1]
        current = chosen.successor
        trace = concat(trace, Trace.of(chosen.label))


def cmd_serve(args) -> int:
    import socket

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((args.bind, args.port))
    except OSError as exc:
        print(f"cannot bind {args.bind}:{args.port}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        probe.close()

    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.bind, port=args.port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing

def build_arg_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="nilcsp",
        description="Workbench for a CSP fragment with an explicit silent (nil) event.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a source file and pretty-print it")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("traces", help="enumerate bounded observable traces")
    p.add_argument("file")
    p.add_argument("--process", required=True, metavar="NAME")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("equiv", help="bounded observable-trace equivalence of two expressions")
    p.add_argument("file")
    p.add_argument("a", metavar="A")
    p.add_argument("b", metavar="B")
    p.add_argument("--depth", type=int, default=8)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("classify", help="live, quiescent, or terminating")
    p.add_argument("file")
    p.add_argument("process", metavar="NAME")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check-laws", help="check every nil law against the trace semantics")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--size", type=int, default=6)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_laws)

    p = sub.add_parser("animate", help="play the environment against a process")
    p.add_argument("file")
    p.add_argument("process", metavar="NAME")
    p.set_defaults(func=cmd_animate)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--bind", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return top


def main(argv=None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "command", None) == "check-laws" and args.seed is None:
        try:
            args.seed = _default_seed()
        except SemanticError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SEMANTIC
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SemanticError, SemanticsError, TermError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except KeyboardInterrupt:
        return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
