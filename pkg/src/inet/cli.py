"""Command-line entry point.

Exit codes: 0 on success, 1 on program errors (parse, validation, missing
rule, failed benchmark verification), 2 on resource caps (loop or step cap).
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from . import bench as benchlib
from .core import validate
from .engine import EngineConfig, evaluate
from .errors import (
    InetError,
    LoopCapExceeded,
    ParseError,
    StepCapExceeded,
)
from .lang import parse_program, print_configuration
from .oracle import Strategy, normalize
from .profile import RunProfile, emit_csv, record, summary_line

EXIT_OK = 0
EXIT_PROGRAM_ERROR = 1
EXIT_RESOURCE_CAP = 2


def _engine_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--slots", type=int, default=None, help="result slots per equation")
    sub.add_argument("--workers", type=int, default=1, help="parallelism degree hint")
    sub.add_argument("--max-loops", type=int, default=1_000_000)
    sub.add_argument("--stats", metavar="FILE", help="write the per-loop CSV profile")
    sub.add_argument("--summary", action="store_true", help="print the one-line summary")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inet", description="Parallel interaction net evaluator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a .inet program")
    run.add_argument("path")
    run.add_argument(
        "--engine", choices=("parallel", "oracle"), default="parallel"
    )
    run.add_argument("--seed", type=int, default=0, help="oracle strategy seed")
    run.add_argument("--max-steps", type=int, default=10_000_000)
    _engine_args(run)

    check = sub.add_parser("check", help="validate a .inet program")
    check.add_argument("path")

    bench = sub.add_parser("bench", help="run a builtin benchmark and verify it")
    bench.add_argument("name", choices=benchlib.PROGRAM_NAMES)
    bench.add_argument("params", type=int, nargs="*")
    _engine_args(bench)

    orun = sub.add_parser("oracle-run", help="evaluate with the sequential oracle")
    orun.add_argument("path")
    orun.add_argument("--seed", type=int, default=0)
    orun.add_argument("--max-steps", type=int, default=10_000_000)

    return parser


def _load(path: str):
    with open(path, encoding="utf-8") as f:
        return parse_program(f.read())


def _write_stats(profile: RunProfile, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as f:
            emit_csv(profile, f)


def _run_parallel(args, name: str, config, rules) -> int:
    cfg = EngineConfig(
        slot_count=args.slots, max_loops=args.max_loops, worker_hint=args.workers
    )
    t0 = time.perf_counter()
    result = evaluate(config, rules, cfg)
    wall_ms = (time.perf_counter() - t0) * 1000
    profile = record(result.loops)
    _write_stats(profile, args.stats)
    print(print_configuration(result.final))
    if args.summary:
        print(summary_line(name, profile, wall_ms))
    return EXIT_OK


def cmd_run(args) -> int:
    program = _load(args.path)
    if args.engine == "oracle":
        final = normalize(
            program.net, program.rules, Strategy(args.seed), args.max_steps
        )
        print(print_configuration(final))
        return EXIT_OK
    return _run_parallel(args, args.path, program.net, program.rules)


def cmd_check(args) -> int:
    program = _load(args.path)
    violations = validate(program.net, program.rules)
    for v in violations:
        print(f"{args.path}: {v.kind}: {v.message}", file=sys.stderr)
    if violations:
        return EXIT_PROGRAM_ERROR
    print(f"{args.path}: ok")
    return EXIT_OK


def cmd_bench(args) -> int:
    prog = benchlib.program(args.name)
    params = tuple(args.params) if args.params else prog.default_params
    config = prog.build_input(*params)
    cfg = EngineConfig(
        slot_count=args.slots, max_loops=args.max_loops, worker_hint=args.workers
    )
    t0 = time.perf_counter()
    result = evaluate(config, prog.rules, cfg)
    wall_s = time.perf_counter() - t0
    profile = record(result.loops)
    _write_stats(profile, args.stats)
    ok = prog.verify(result.final, *params)
    ips = result.total_interactions / wall_s if wall_s > 0 else 0.0
    label = f"{args.name}({','.join(map(str, params))})"
    print(summary_line(label, profile, wall_s * 1000))
    print(f"{label}: verified={str(ok).lower()} interactions_per_second={ips:.0f}")
    if not ok:
        print(f"{label}: result disagrees with the reference value", file=sys.stderr)
        return EXIT_PROGRAM_ERROR
    return EXIT_OK


def cmd_oracle_run(args) -> int:
    program = _load(args.path)
    final = normalize(program.net, program.rules, Strategy(args.seed), args.max_steps)
    print(print_configuration(final))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "check": cmd_check,
        "bench": cmd_bench,
        "oracle-run": cmd_oracle_run,
    }
    try:
        return handlers[args.command](args)
    except (LoopCapExceeded, StepCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE_CAP
    except ParseError as exc:
        path = getattr(args, "path", "<input>")
        print(f"{path}:{exc}", file=sys.stderr)
        return EXIT_PROGRAM_ERROR
    except (InetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROGRAM_ERROR


if __name__ == "__main__":
    sys.exit(main())
