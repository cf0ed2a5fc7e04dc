"""Command line: mfcalc run FILE | corpus NAME | hkr-check.

Exit codes: 0 all records ok, 1 some check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import dsl
from .corpus import CORPORA, scripts_for
from .runner import SCHEMA, RunOptions, corpus_checks, run


def _dump(obj, path: Optional[str]):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _summary(label: str, rep) -> None:
    for r in rep.records:
        status = "ok  " if r.get("ok") else "FAIL"
        detail = r.get("error") or _short(r.get("outputs", {}))
        print(f"[{status}] {label}: {r['statement']} {detail}")


def _short(out) -> str:
    if "class" in out:
        return "g = " + out["class"]["g"]
    for key in ("euler", "equal", "closed", "invariant", "homogeneous", "valid", "match", "mu"):
        if key in out:
            return f"{key} = {out[key]}"
    if "ext0" in out:
        return f"ext = ({out['ext0']}, {out['ext1']})"
    return ""


def _opts(args) -> RunOptions:
    trials = 5 if args.trials is None else args.trials
    return RunOptions(seed=args.seed, trials=trials, max_twist=args.max_twist, strict=args.strict)


def cmd_run(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            src = fh.read()
        script = dsl.parse(src)
    except (OSError, dsl.ParseError, dsl.SemanticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    rep = run(script, _opts(args), source=src)
    _summary(args.file, rep)
    _dump(rep.to_json(), args.json)
    return 0 if rep.ok else 1


def cmd_corpus(args) -> int:
    try:
        scripts = scripts_for(args.name)
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return 2
    reports = []
    ok = True
    for sname, src in scripts:
        script = dsl.parse(src)
        extra = corpus_checks(script) if args.check == "all" else ()
        rep = run(script, _opts(args), source=src, extra=extra)
        _summary(sname, rep)
        d = rep.to_json()
        d["corpus_item"] = sname
        reports.append(d)
        ok = ok and rep.ok
    _dump({"schema": SCHEMA, "corpus": args.name, "ok": ok, "reports": reports}, args.json)
    return 0 if ok else 1


def cmd_hkr(args) -> int:
    from .hkr import verify_chain_maps

    names = [f"x{i + 1}" for i in range(args.vars)] if args.names is None else args.names.split(",")
    if len(names) != args.vars:
        print("error: --names must list exactly --vars names", file=sys.stderr)
        return 2
    try:
        src = f"ring {', '.join(names)}; potential W = {args.potential};"
        script = dsl.parse(src)
    except (dsl.ParseError, dsl.SemanticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    w = dsl.eval_poly(script.statements[1].poly, names)
    trials = 200 if args.trials is None else args.trials
    rep = verify_chain_maps(args.vars, w, trials, args.max_len, args.seed)
    out = {"schema": SCHEMA, "potential": w.format(names), "seed": args.seed, **rep.to_json()}
    status = "ok" if rep.ok else "FAIL"
    print(f"[{status}] hkr-check w = {w.format(names)}: {rep.trials} trials, passed {out['passed']}")
    _dump(out, args.json)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mfcalc", description="Chern characters and boundary-bulk maps of matrix factorizations")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    common.add_argument("--seed", type=int, default=0)
    # default resolved per verb: 5 connections, 200 HKR samples
    common.add_argument("--trials", type=int, default=None, help="random connections (default 5) / HKR samples (default 200)")
    common.add_argument("--max-twist", type=int, default=None, help="override the width of the twist scan window")
    common.add_argument("--strict", action="store_true", help="treat warnings as failures")
    sub = p.add_subparsers(dest="verb", required=True)

    r = sub.add_parser("run", parents=[common], help="run a script")
    r.add_argument("file")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("corpus", parents=[common], help="run a named corpus")
    c.add_argument("name", help=f"one of {', '.join(sorted(CORPORA))} or a single script name")
    c.add_argument("--check", choices=["none", "all"], default="none")
    c.set_defaults(func=cmd_corpus)

    h = sub.add_parser("hkr-check", parents=[common], help="randomized bar-complex identities")
    h.add_argument("--vars", type=int, required=True)
    h.add_argument("--potential", required=True)
    h.add_argument("--names", default=None, help="comma-separated variable names (default x1,x2,...)")
    h.add_argument("--max-len", type=int, default=4)
    h.set_defaults(func=cmd_hkr)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
