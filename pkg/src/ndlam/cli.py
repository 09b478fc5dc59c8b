"""Command line front end.

Four subcommands: `eval` renders a depth-truncated effect tree,
`converge` runs both convergence routes and cross-checks them, `sim`
runs a simulation query, and `check` drives a law suite. Every command
takes --json; the human rendering is derived from the same payload.
Exit codes: 0 success, 1 counterexample or route mismatch, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from ndlam import delay, may_pd, opsem, simulation, suites
from ndlam.delay import Converged
from ndlam.keys import canon_key
from ndlam.syntax import ParseError, parse, show

DEFAULT_DEPTH = 8
DEFAULT_FUEL = 6
DEFAULT_BUDGET = 50


def _emit(payload: dict, human: str, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _parse_closed(text: str) -> "opsem.Term":
    term = parse(text)
    return term


def cmd_eval(args) -> int:
    term = _parse_closed(args.term)
    if args.mode == "may":
        rendered = may_pd.truncate(opsem.eval_may(term), args.depth).canon_key()
    else:
        rendered = delay.truncate(opsem.eval_must(term), args.depth).canon_key()
    payload = {
        "command": "eval",
        "mode": args.mode,
        "depth": args.depth,
        "term": show(term),
        "truncation": rendered,
    }
    _emit(payload, rendered, args.json)
    return 0


def cmd_converge(args) -> int:
    term = _parse_closed(args.term)
    budget = args.budget
    if args.mode == "may":
        inductive, cut = opsem.bigstep_may_all(term, budget)
        guarded = may_pd.reachable_values(opsem.eval_may(term), budget)
        agree = inductive == frozenset(guarded)
        values = sorted(show(v) for v in guarded)
        payload = {
            "command": "converge",
            "mode": "may",
            "budget": budget,
            "term": show(term),
            "values": values,
            "search_cut": cut,
            "routes_agree": agree,
        }
        rendered = "{" + ", ".join(values) + "}"
        if not values:
            rendered += "  (no value found within budget)"
        if not agree:
            rendered += "  ROUTE MISMATCH"
        _emit(payload, rendered, args.json)
        return 0 if agree else 1
    inductive = opsem.bigstep_must(term, budget)
    guarded = delay.run(opsem.eval_must(term), budget)
    ind_timeout = inductive is delay.TIMEOUT
    g_timeout = not isinstance(guarded, Converged)
    agree = (ind_timeout and g_timeout) or (
        not ind_timeout and not g_timeout and inductive == guarded.value
    )
    payload = {
        "command": "converge",
        "mode": "must",
        "budget": budget,
        "term": show(term),
        "result": "timeout" if ind_timeout else "converged",
        "values": None if ind_timeout else sorted(show(v) for v in inductive),
        "routes_agree": agree,
    }
    rendered = "timeout" if ind_timeout else "{" + ", ".join(payload["values"]) + "}"
    if not agree:
        rendered += "  ROUTE MISMATCH"
    _emit(payload, rendered, args.json)
    return 0 if agree else 1


def cmd_sim(args) -> int:
    m = _parse_closed(args.left)
    n = _parse_closed(args.right)
    cfg = simulation.SimConfig(
        fuel=args.fuel,
        conv_budget=args.budget,
        pool_limit=args.pool_size,
    )
    verdict = simulation.sim(m, n, cfg, args.mode)
    payload = {
        "command": "sim",
        "mode": args.mode,
        "verdict": verdict.value,
        "reason": verdict.reason,
        "fuel": cfg.fuel,
        "conv_budget": cfg.conv_budget,
        "pool": [show(v) for v in simulation.query_pool(cfg, m, n)],
        "left": show(m),
        "right": show(n),
        "trace": None,
    }
    _emit(payload, str(verdict), args.json)
    return 0


def cmd_check(args) -> int:
    try:
        report = suites.run_suite(
            args.suite,
            seed=args.seed,
            cases=args.cases,
            depth=args.depth,
            fuel=args.fuel,
            corpus_path=args.corpus,
        )
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    payload = report.to_dict()
    lines = [
        f"suite {report.suite}: {report.checked} cases checked, "
        f"{'ok' if report.ok else f'{len(report.failures)} failure(s)'}"
    ]
    for item in report.expected_failures:
        lines.append(f"  expected failure: {json.dumps(item, sort_keys=True)}")
    if not report.ok:
        lines.append(f"  first counterexample: {json.dumps(report.failures[0], sort_keys=True)}")
    if report.info:
        lines.append(f"  info: {json.dumps(report.info, sort_keys=True)}")
    _emit(payload, "\n".join(lines), args.json)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndlam",
        description="May/must-convergence workbench for the lambda calculus with choice",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="render a depth-truncated effect tree")
    p_eval.add_argument("term")
    p_eval.add_argument("--mode", choices=("may", "must"), default="may")
    p_eval.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p_eval.add_argument("--json", action="store_true")
    p_eval.set_defaults(fn=cmd_eval)

    p_conv = sub.add_parser("converge", help="run both convergence routes and cross-check")
    p_conv.add_argument("term")
    p_conv.add_argument("--mode", choices=("may", "must"), default="may")
    p_conv.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p_conv.add_argument("--json", action="store_true")
    p_conv.set_defaults(fn=cmd_converge)

    p_sim = sub.add_parser("sim", help="applicative simulation query")
    p_sim.add_argument("left")
    p_sim.add_argument("right")
    p_sim.add_argument("--mode", choices=("may", "must"), default="may")
    p_sim.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p_sim.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p_sim.add_argument("--pool-size", type=int, default=None)
    p_sim.add_argument("--json", action="store_true")
    p_sim.set_defaults(fn=cmd_sim)

    p_check = sub.add_parser("check", help="run a law suite")
    p_check.add_argument("--suite", required=True, choices=sorted(suites.SUITES))
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--cases", type=int, default=None)
    p_check.add_argument("--depth", type=int, default=12)
    p_check.add_argument("--fuel", type=int, default=8)
    p_check.add_argument("--corpus", default=None)
    p_check.add_argument("--json", action="store_true")
    p_check.set_defaults(fn=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    sys.setrecursionlimit(50_000)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
