"""Command-line entry point: ``cbpv <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .denote import interp_comp, make_model
from .errors import CBPVError
from .evaluate import eval_comp
from .galois_syntax import rhs_term, to_name, to_value
from .posets import budget
from .sexpr import (
    parse_comp, parse_ctx, parse_src, parse_src_ctx, parse_src_type, read, show, src_type_of,
)
from .source import STRATEGIES, check_src, src_sig
from .typecheck import EffectSignature


def _text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _ctx_text(arg: str) -> str:
    """A context given inline or as a file path."""
    return _text(arg) if os.path.exists(arg) else arg


def cmd_eval(args) -> int:
    m = parse_comp(_text(args.file))
    out = eval_comp(m, args.fuel, EffectSignature.parse(args.sig) if args.sig else None)
    for t in sorted(show(t) for t in out.terminals):
        print(t)
    if out.exhausted:
        print("; fuel exhausted on some branch")
    return 0


def cmd_translate(args) -> int:
    e = parse_src(_text(args.file))
    check_src(parse_src_ctx(_ctx_text(args.ctx)) if args.ctx else (), e, src_sig(e))
    print(show(STRATEGIES[args.strategy](e)))
    return 0


def cmd_galois_term(args) -> int:
    m = parse_comp(_text(args.file))
    ty = parse_src_type(args.type)
    fn = to_name if args.dir == "toname" else to_value
    print(show(fn(ty, m)))
    return 0


def cmd_rhs(args) -> int:
    e = parse_src(_text(args.file))
    ctx = parse_src_ctx(_ctx_text(args.ctx)) if args.ctx else ()
    print(show(rhs_term(ctx, e)))
    return 0


def cmd_denote(args) -> int:
    model = make_model(args.model)
    m = parse_comp(_text(args.file))
    ctx = parse_ctx(_ctx_text(args.ctx)) if args.ctx else ()
    with budget(args.budget):
        f = interp_comp(ctx, m, model)
    for k in range(f.dom.size):
        print(f"{f.dom.label(k)}\t{f.cod.label(f(k))}")
    return 0


def cmd_suite(args) -> int:
    from .harness.gen import GALOIS_TYPES
    from .harness.suite import run_suite
    types = GALOIS_TYPES
    if args.types:
        types = tuple(src_type_of(t) for t in read(f"({args.types})"))
    with budget(args.budget):
        res = run_suite(args.model, types, args.seed, args.count, args.fuel)
    records = [r.to_json() for r in res.reports]
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write("\n".join(records) + "\n")
    else:
        for line in records:
            print(line)
    for r in res.reports:
        if r.verdict == "fail":
            print(r.summary(), file=sys.stderr)
    print(res.summary(), file=sys.stderr)
    return 0 if res.ok else 1


def cmd_repro(args) -> int:
    from .harness.checks import repro
    record = json.loads(_text(args.witness))
    if "witness" in record and isinstance(record["witness"], dict):
        record = record["witness"]
    report = repro(record)
    print(report.to_json())
    return 1 if report.verdict == "fail" else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cbpv", description="Call-by-push-value toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate a closed CBPV computation")
    s.add_argument("file")
    s.add_argument("--fuel", type=int, default=10_000)
    s.add_argument("--sig", choices=["pure", "div", "nondet"], help="default: inferred from the term")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("translate", help="translate a source expression into CBPV")
    s.add_argument("--strategy", choices=sorted(STRATEGIES), default="cbv")
    s.add_argument("file")
    s.add_argument("--ctx")
    s.set_defaults(run=cmd_translate)

    s = sub.add_parser("galois-term", help="wrap a CBPV computation with toname or tovalue")
    s.add_argument("--dir", choices=["toname", "tovalue"], required=True)
    s.add_argument("file")
    s.add_argument("--type", required=True, help="source type, e.g. '(-> bool bool)'")
    s.set_defaults(run=cmd_galois_term)

    s = sub.add_parser("rhs", help="tovalue of the by-name translation, in by-value typing")
    s.add_argument("file")
    s.add_argument("--ctx")
    s.set_defaults(run=cmd_rhs)

    s = sub.add_parser("denote", help="print the denotation table of a computation")
    s.add_argument("file")
    s.add_argument("--model", default="lift", help="identity|id|lift|downset|writer[:G:L]")
    s.add_argument("--ctx")
    s.add_argument("--budget", type=int, default=4096)
    s.set_defaults(run=cmd_denote)

    s = sub.add_parser("suite", help="run every property check for one model")
    s.add_argument("--model", required=True)
    s.add_argument("--types", help="space-separated source types")
    s.add_argument("--seed", type=lambda t: int(t, 0))
    s.add_argument("--count", type=int, default=500)
    s.add_argument("--fuel", type=int, default=10_000)
    s.add_argument("--budget", type=int, default=4096)
    s.add_argument("--json", help="write one JSON record per check to this file")
    s.set_defaults(run=cmd_suite)

    s = sub.add_parser("repro", help="rerun the instance recorded in a witness")
    s.add_argument("--witness", required=True, help="JSON report or witness file, '-' for stdin")
    s.set_defaults(run=cmd_repro)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (CBPVError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
