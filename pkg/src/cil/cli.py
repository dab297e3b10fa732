"""Command line front end: ``cil <command> ...``.

Exit codes: 0 success (or equivalent / valid), 1 not equivalent / invalid,
2 parse, sort or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys

from . import bl, serialize
from .graph import dot_export
from .model import SUITES, ModelError, check_model_conditions, load_config, validity_harness
from .parser import ParseError, parse_bl, parse_program, print_program, show_bl
from .rewrite import DEFAULT_FUEL, FuelExhausted, normalize, normalize_random, sense_equiv
from .terms import Signature, SortError, children, show
from .translate import TranslationError, bealer_decompose, canonical_form, j_translate

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2

_DECL = re.compile(r"\s*(?:#[^\n]*\n\s*)*prim\s+([A-Za-z][A-Za-z0-9_]*'*)\s*:\s*(-?\d+)\s*[.;]")


class UsageError(ValueError):
    pass


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load_cil(arg: str):
    text = _read(arg)
    if text.lstrip().startswith("{"):
        t = serialize.loads(text)
        return t, None
    prog = parse_program(text)
    return prog.main, prog.sig


def _load_bl(arg: str):
    """BL text, optionally preceded by ``prim c : -1.`` declarations."""
    text = _read(arg)
    if text.lstrip().startswith("{"):
        return serialize.loads(text), Signature()
    sig = Signature()
    while True:
        m = _DECL.match(text)
        if not m:
            break
        sig = sig.declare(m.group(1), int(m.group(2)))
        text = text[m.end():]
    return parse_bl(text, sig), sig


def _emit(args, text: str, obj=None) -> None:
    if args.format == "json" and obj is not None:
        print(obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_parse(args) -> int:
    t, sig = _load_cil(args.term)
    _emit(args, print_program(t), serialize.dumps(t, indent=2))
    return EXIT_OK


def cmd_sort(args) -> int:
    t, _ = _load_cil(args.term)
    sort = "none (pseudo-variable)" if t.sort is None else str(t.sort)
    _emit(args, sort, {"sort": t.sort})
    return EXIT_OK


def cmd_normalize(args) -> int:
    t, _ = _load_cil(args.term)
    if args.trace:
        nf, steps = normalize(t, fuel=args.fuel, trace=True)
        if args.format == "json":
            _emit(args, "", {"normal_form": show(nf),
                             "steps": [{"rule": s.rule, "path": list(s.path),
                                        "before": show(s.before), "after": show(s.after)} for s in steps]})
            return EXIT_OK
        for i, s in enumerate(steps, 1):
            where = ".".join(map(str, s.path)) or "root"
            print(f"{i:3d}. {s.rule:<9} at {where}: {show(s.before)}  =>  {show(s.after)}")
        print(show(nf))
        return EXIT_OK
    if args.random:
        nf, _ = normalize_random(t, random.Random(args.seed), fuel=args.fuel)
    else:
        nf = normalize(t, fuel=args.fuel)
    _emit(args, show(nf), serialize.dumps(nf, indent=2))
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, _ = _load_cil(args.left)
    b, _ = _load_cil(args.right)
    same = sense_equiv(a, b, fuel=args.fuel)
    _emit(args, "equivalent" if same else "not equivalent", {"equivalent": same})
    return EXIT_OK if same else EXIT_NO


def cmd_to_bl(args) -> int:
    t, _ = _load_cil(args.term)
    image = j_translate(t)
    _emit(args, show_bl(image), serialize.dumps(image, indent=2))
    return EXIT_OK


def cmd_from_bl(args) -> int:
    t, sig = _load_bl(args.term)
    if not isinstance(t, (bl.Abstract, bl.Const)):
        t = bl.Abstract(t, ())
    d = bealer_decompose(t, allow_free=True)
    _emit(args, print_program(d), serialize.dumps(d, indent=2))
    return EXIT_OK


def _tree(t, indent: int = 0, out=None) -> list:
    out = [] if out is None else out
    pad = "  " * indent
    label = show(t) if not children(t) else show(t).split("(", 1)[0]
    sort = "" if t.sort is None else f"  : {t.sort}"
    out.append(f"{pad}{label}{sort}")
    for c in children(t):
        _tree(c, indent + 1, out)
    return out


def cmd_decompose(args) -> int:
    if args.bl:
        t, _ = _load_bl(args.term)
        if not isinstance(t, (bl.Abstract, bl.Const)):
            t = bl.Abstract(t, ())
        d = bealer_decompose(t, allow_free=True)
    else:
        t, _ = _load_cil(args.term)
        d = canonical_form(t)
    _emit(args, "\n".join(_tree(d)), serialize.dumps(d, indent=2))
    return EXIT_OK


def cmd_graph(args) -> int:
    t, _ = _load_cil(args.term)
    sys.stdout.write(dot_export(t))
    return EXIT_OK


def cmd_model(args) -> int:
    if not args.config:
        raise UsageError("model needs --config FILE")
    cfg = load_config(args.config)
    if args.action == "check":
        rep = check_model_conditions(cfg)
    else:
        suites = args.suite or list(SUITES)
        rep = validity_harness(cfg, suites)
    _emit(args, rep.text(), rep.to_json())
    return EXIT_OK if rep.ok else EXIT_NO


def cmd_demo(args) -> int:
    from .demo import DEMO_CONFIG, demo_config, run_demo
    if args.dump_config:
        print(json.dumps(DEMO_CONFIG, indent=2, ensure_ascii=False))
        return EXIT_OK
    cfg = load_config(args.config) if args.config else demo_config()
    outcomes = run_demo(cfg)
    if args.format == "json":
        _emit(args, "", [o.__dict__ for o in outcomes])
    else:
        for o in outcomes:
            print(f"[{'pass' if o.ok else 'FAIL'}] {o.name} ({o.expect}): {o.detail}")
    return EXIT_OK if all(o.ok for o in outcomes) else EXIT_NO


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="rewrite step budget")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--config", help="model configuration (JSON)")

    p = argparse.ArgumentParser(prog="cil", description="Combinatory intensional logic toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *terms):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for t in terms:
            sp.add_argument(t, help="term text, a file name, or - for stdin")
        sp.set_defaults(fn=fn)
        return sp

    add("parse", cmd_parse, "parse a CIL program and print it back", "term")
    add("sort", cmd_sort, "print the sort of a CIL term", "term")
    sp = add("normalize", cmd_normalize, "canonical form by the sense rules", "term")
    sp.add_argument("--trace", action="store_true", help="print every rewrite step")
    sp.add_argument("--random", action="store_true", help="contract redexes in a random order (see --seed)")
    add("equiv", cmd_equiv, "decide sense-equivalence of two CIL terms", "left", "right")
    add("to-bl", cmd_to_bl, "translate a CIL term to BL", "term")
    add("from-bl", cmd_from_bl, "Bealer decomposition of a BL abstract", "term")
    sp = add("decompose", cmd_decompose, "dump the Bealer decomposition tree", "term")
    sp.add_argument("--bl", action="store_true", help="input is BL rather than CIL")
    sp = add("graph", cmd_graph, "concept-graph of a CIL term", "term")
    sp.add_argument("--dot", action="store_true", help="emit DOT (the only graph format)")
    sp = add("model", cmd_model, "check model conditions or run the validity harness")
    sp.add_argument("action", choices=("check", "valid"))
    sp.add_argument("--suite", action="append", choices=SUITES, help="restrict `valid` to a suite")
    sp = add("demo", cmd_demo, "run the bundled corpus of belief inferences")
    sp.add_argument("--dump-config", action="store_true", help="print the demo model configuration")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except (ParseError, SortError, TranslationError, serialize.SchemaError, bl.BLError,
            ModelError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FuelExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
