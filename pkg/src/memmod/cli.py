"""Command-line front end: run litmus files, dump traces, run the law suite.

Exit codes: 0 all expectations met, 1 some expectation violated,
2 inconclusive at bound, 3 parse/config error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

from .analysis import InputError, run_law_suite
from .ast import PAR, Program, pseq, NIL
from .litmus import LitmusFile, ParseError, Report, parse_litmus, run_litmus
from .reorder import (EARLIEST_FIRST, LEFT_TO_RIGHT, NEAREST_FIRST, NONDET,
                      ModelConfig)
from .semantics import (DEFAULT_LIMITS, Domain, ExplorationLimits,
                        enumerate_traces)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3


def corpus_dir() -> Path:
    """The litmus corpus shipped with the package."""
    return Path(__file__).resolve().parent / "corpus"


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="memmod",
        description="thread-local C memory model litmus runner")
    sub = top.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--model", choices=["c11", "sc", "par"], default=None)
        p.add_argument("--sfp", action="store_true", default=None,
                       help="allow guards to forward into later instructions")
        p.add_argument("--ocmore", choices=list("abcde"), default=None,
                       help="ordering-constraint simplification policy")
        p.add_argument("--no-forwarding", action="store_true", default=None)
        p.add_argument("--optimize", action="store_true", default=None)
        p.add_argument("--incremental", action="store_true", default=None)
        p.add_argument("--no-guard-store-reorder", action="store_true",
                       default=None,
                       help="hardware-like preset: no stores before guards")
        p.add_argument("--eval-order", choices=["nondet", "ltr"], default=None)
        p.add_argument("--fold-order", choices=["nearest", "earliest"],
                       default=None)

    def add_limit_flags(p):
        p.add_argument("--max-unroll", type=int, default=None)
        p.add_argument("--max-depth", type=int, default=None)

    run_p = sub.add_parser("run", help="run one litmus file")
    run_p.add_argument("file")
    add_model_flags(run_p)
    add_limit_flags(run_p)
    run_p.add_argument("--json", action="store_true")
    run_p.add_argument("--witness", action="store_true",
                       help="print witness/counterexample traces")

    traces_p = sub.add_parser("traces", help="print the visible-trace set")
    traces_p.add_argument("file")
    add_model_flags(traces_p)
    add_limit_flags(traces_p)

    laws_p = sub.add_parser("laws", help="run the reduction-law fixture suite")
    laws_p.add_argument("--law", default=None, help="law id or fixture name")
    add_limit_flags(laws_p)

    corpus_p = sub.add_parser("corpus", help="run every .lit file in a directory")
    corpus_p.add_argument("dir", nargs="?", default=None,
                          help="directory of .lit files (default: shipped corpus)")
    add_model_flags(corpus_p)
    add_limit_flags(corpus_p)
    corpus_p.add_argument("--json", action="store_true")
    return top


def _cli_overrides(args) -> Dict[str, object]:
    out: Dict[str, object] = {}
    if getattr(args, "model", None) is not None:
        out["base"] = args.model
    if getattr(args, "sfp", None):
        out["sfp"] = True
    if getattr(args, "ocmore", None) is not None:
        out["ocmore_option"] = args.ocmore
    if getattr(args, "no_forwarding", None):
        out["forwarding"] = False
    if getattr(args, "optimize", None):
        out["optimize"] = True
    if getattr(args, "incremental", None):
        out["incremental"] = True
    if getattr(args, "no_guard_store_reorder", None):
        out["guard_store_reorder"] = False
    if getattr(args, "eval_order", None) is not None:
        out["eval_order"] = (NONDET if args.eval_order == "nondet"
                             else LEFT_TO_RIGHT)
    if getattr(args, "fold_order", None) is not None:
        out["fold_order"] = (NEAREST_FIRST if args.fold_order == "nearest"
                             else EARLIEST_FIRST)
    return out


def _limits(args) -> ExplorationLimits:
    max_unroll = getattr(args, "max_unroll", None) or DEFAULT_LIMITS.max_unroll
    max_depth = getattr(args, "max_depth", None) or DEFAULT_LIMITS.max_depth
    max_configs = DEFAULT_LIMITS.max_configs
    env = os.environ.get("MEMMOD_MAX_CONFIGS")
    if env:
        try:
            max_configs = int(env)
        except ValueError:
            raise InputError(f"bad MEMMOD_MAX_CONFIGS value {env!r}")
    return ExplorationLimits(max_unroll, max_depth, max_configs)


def _load(path: str) -> LitmusFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    return parse_litmus(text)


def _cmd_run(args, out) -> int:
    f = _load(args.file)
    report = run_litmus(f, limits=_limits(args), cli_overrides=_cli_overrides(args),
                        file_path=args.file)
    if args.json:
        print(report.to_json(include_witness=args.witness or True), file=out)
    else:
        for line in report.lines(witness=args.witness):
            print(line, file=out)
    return report.exit_status


def _cmd_traces(args, out) -> int:
    f = _load(args.file)
    cfg = f.effective_config(cli_overrides=_cli_overrides(args))
    program = f.program
    composed = NIL
    for t in reversed(program.threads):
        composed = pseq(PAR, t.body, composed)
    domain = Domain.from_program(program)
    ts = enumerate_traces(cfg, composed, domain, _limits(args))
    from .ast import render_action
    rendered = sorted(" ;; ".join(render_action(a) for a in t) or "<empty>"
                      for t in ts.traces)
    print(f"{len(rendered)} visible trace(s)", file=out)
    for line in rendered:
        print(f"  {line}", file=out)
    if ts.truncated:
        print("  (enumeration truncated at bound)", file=out)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_laws(args, out) -> int:
    results = run_law_suite(args.law, _limits(args))
    failed = 0
    for res in results:
        expected = res.fixture.expect
        verdict = "ok" if res.passed else "UNEXPECTED"
        print(f"{res.fixture.name}: {res.judgment.kind} {res.judgment.status}"
              f" (expected {expected}) [{verdict}]", file=out)
        if not res.passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} fixtures as expected", file=out)
    return EXIT_OK if failed == 0 else EXIT_VIOLATED


def _cmd_corpus(args, out) -> int:
    directory = Path(args.dir) if args.dir else corpus_dir()
    if not directory.is_dir():
        raise InputError(f"not a directory: {directory}")
    files = sorted(directory.glob("*.lit"))
    if not files:
        raise InputError(f"no .lit files in {directory}")
    worst = EXIT_OK
    reports: List[Report] = []
    for path in files:
        f = _load(str(path))
        report = run_litmus(f, limits=_limits(args),
                            cli_overrides=_cli_overrides(args),
                            file_path=str(path))
        reports.append(report)
        status = {0: "ok", 1: "FAIL", 2: "inconclusive"}[report.exit_status]
        print(f"{path.name}: {status} "
              f"({sum(r.met for r in report.expectations)}/"
              f"{len(report.expectations)} expectations)", file=out)
        if report.exit_status == EXIT_VIOLATED:
            worst = EXIT_VIOLATED
        elif report.exit_status == EXIT_INCONCLUSIVE and worst != EXIT_VIOLATED:
            worst = EXIT_INCONCLUSIVE
    met = sum(r.exit_status == EXIT_OK for r in reports)
    print(f"{met}/{len(reports)} files passed", file=out)
    return worst


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": _cmd_run, "traces": _cmd_traces,
                "laws": _cmd_laws, "corpus": _cmd_corpus}
    try:
        return handlers[args.command](args, out)
    except (ParseError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
