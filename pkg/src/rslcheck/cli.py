"""Command-line interface.

Exit codes: 0 true / success, 1 formula false or conformance fails,
2 usage, parse or input error, 3 internal invariant violation (including an
oracle disagreement or a failing selftest).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, ctlstar, specs
from .checker import check
from .errors import (
    CapacityError, EmptyComponentError, IncompleteStrategyError, ModelError, ParseError,
    ReductionError, RSLError, SolverError, SpecError, TranslationError, UnknownActionError,
    UnknownStateError,
)
from .game import natural_key, validate_strategy
from .parsing import parse_formula, parse_model, parse_spec, parse_strategy
from .reduction import reduce
from .selftest import SUITES, run_all
from .solvers import Restriction, backward_induction
from .syntax import check_formula, format_formula

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

INPUT_ERRORS = (
    ParseError, SpecError, UnknownStateError, UnknownActionError, ModelError, SolverError,
    TranslationError, ReductionError, IncompleteStrategyError, EmptyComponentError,
    CapacityError, OSError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _global_flags(p, defaults):
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--restriction-semantics", choices=specs.SEMANTICS, default=d(specs.SET_MINUS),
                   help="reading of the restriction operator (default: %(default)s)")
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--seed", type=int, default=d(None),
                   help=f"random seed (default: $RSL_SEED or {specs.DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _global_flags(common, defaults=False)
    parser = _Parser(prog="rslcheck", description="Model checker for strategy logic with move restrictions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, defaults=True)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("check", parents=[common], help="evaluate a formula at a state")
    p.add_argument("--model", required=True)
    p.add_argument("--state", help="state to evaluate at (default: the root)")
    p.add_argument("--formula", required=True)

    p = sub.add_parser("conform", parents=[common], help="does a strategy conform to a spec at a state")
    p.add_argument("--model", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--spec", required=True)

    p = sub.add_parser("reduce", parents=[common], help="rewrite an RSL formula into SL")
    p.add_argument("--formula", required=True)
    p.add_argument("--model", help="needed only for ensures-formulas over restricted specs")

    p = sub.add_parser("translate", parents=[common], help="emit the CTL* translation")
    p.add_argument("--model", required=True)
    p.add_argument("--state")
    p.add_argument("--formula", required=True)
    p.add_argument("--emit", choices=("formula", "model"), default="formula")
    p.add_argument("--literal", action="store_true", help="use the textbook translation forms")

    p = sub.add_parser("xcheck", parents=[common], help="compare the checker with the CTL* oracle")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--literal", action="store_true")
    p.add_argument("--strategies", type=int, default=8, help="strategies per spec for the spec-level check")

    p = sub.add_parser("bi", parents=[common], help="backward induction")
    p.add_argument("--model", required=True)
    p.add_argument("--restrict", action="append", default=[], metavar="P:A[@STATE]",
                   help="forbid action A for player P (from STATE down when given)")

    p = sub.add_parser("selftest", parents=[common], help="run the property suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES), help="run only these suites")
    return parser


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def _model(path):
    return parse_model(_read(path))


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RSL_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"RSL_SEED must be an integer, got {env!r}") from None
    return specs.DEFAULT_SEED


def _restriction(text):
    try:
        who, rest = text.split(":", 1)
        action, _, state = rest.partition("@")
        player = int(who)
    except ValueError:
        raise UsageError(f"--restrict expects P:A or P:A@STATE, got {text!r}") from None
    if player not in (1, 2) or not action:
        raise UsageError(f"--restrict expects P:A or P:A@STATE, got {text!r}")
    return Restriction(player, action, state or None)


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_check(args):
    model = _model(args.model)
    state = args.state or model.root
    phi = parse_formula(args.formula)
    value = check(model, state, phi, args.restriction_semantics)
    _emit(args, {"command": "check", "state": state, "formula": str(phi),
                 "semantics": args.restriction_semantics, "result": value},
          "true" if value else "false")
    return EXIT_TRUE if value else EXIT_FALSE


def cmd_conform(args):
    model = _model(args.model)
    mu = parse_strategy(_read(args.strategy))
    bad = [str(d) for d in validate_strategy(model, mu)]
    spec = parse_spec(args.spec)
    value = specs.conforms(model, mu, args.state, spec)
    _emit(args, {"command": "conform", "state": args.state, "spec": str(spec), "result": value,
                 "warnings": bad},
          ("conforms" if value else "does not conform") + "".join(f"\nwarning: {w}" for w in bad))
    return EXIT_TRUE if value else EXIT_FALSE


def cmd_reduce(args):
    phi = parse_formula(args.formula)
    model = _model(args.model) if args.model else None
    out = reduce(phi, model)
    check_formula(out)
    text = format_formula(out)
    _emit(args, {"command": "reduce", "input": str(phi), "output": text}, text)
    return EXIT_TRUE


def cmd_translate(args):
    model = _model(args.model)
    state = args.state or model.root
    phi = parse_formula(args.formula)
    tr = ctlstar.tr_formula(model, state, phi, semantics=args.restriction_semantics, literal=args.literal)
    m = tr.model(model)
    if args.emit == "model":
        text = ctlstar.format_ctl_model(m).rstrip("\n")
    else:
        text = str(tr.formula)
    _emit(args, {"command": "translate", "state": state, "formula": str(tr.formula),
                 "model": ctlstar.format_ctl_model(m), "emit": args.emit}, text)
    return EXIT_TRUE


def cmd_xcheck(args):
    model = _model(args.model)
    phi = parse_formula(args.formula)
    report = ctlstar.xcheck(model, phi, semantics=args.restriction_semantics, literal=args.literal,
                            max_strategies=args.strategies, seed=_seed(args))
    lines = [f"formula {phi}", f"states agreeing: {report.agree}/{report.agree + len(report.disagree)}"]
    lines += [f"  disagree at {s}: checker={a} ctlstar={b}" for s, a, b in report.disagree]
    if report.spec_agree or report.spec_disagree:
        total = report.spec_agree + len(report.spec_disagree)
        lines.append(f"spec-level checks agreeing: {report.spec_agree}/{total}")
        lines += [f"  {sp} at {s}: conforms={a} ctlstar={b}" for sp, _, s, a, b in report.spec_disagree]
    lines.append("ok" if report.ok else "DISAGREEMENT")
    payload = dict(report.as_dict(), command="xcheck")
    _emit(args, payload, "\n".join(lines))
    return EXIT_TRUE if report.ok else EXIT_INTERNAL


def cmd_bi(args):
    model = _model(args.model)
    restrictions = [_restriction(r) for r in args.restrict]
    res = backward_induction(model, restrictions)
    lines = []
    for s in model.ordered_states():
        if s in res.choices:
            lines.append(f"{s} (player {model.turn[s]}): {','.join(sorted(res.choices[s], key=natural_key))}")
    lines.append(f"path: {' '.join(res.path(model))}")
    lines.append(f"outcome: ({res.outcome[0]}, {res.outcome[1]}) at {res.leaf}")
    payload = dict(res.as_dict(model), command="bi",
                   restrictions=[{"player": r.player, "action": r.action, "from": r.from_state}
                                 for r in restrictions])
    _emit(args, payload, "\n".join(lines))
    return EXIT_TRUE


def cmd_selftest(args):
    seed = _seed(args)
    results = run_all(seed, args.suite)
    ok = all(r.ok for r in results)
    lines = [f"seed {seed}"]
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.checks} checks, "
                     f"{r.failures} failures ({r.seconds:.1f}s)")
        for w in r.witnesses[:3]:
            lines.append(f"    {json.dumps(w, sort_keys=True)}")
    _emit(args, {"command": "selftest", "seed": seed, "ok": ok,
                 "suites": [r.as_dict() for r in results]}, "\n".join(lines))
    return EXIT_TRUE if ok else EXIT_INTERNAL


COMMANDS = {
    "check": cmd_check, "conform": cmd_conform, "reduce": cmd_reduce, "translate": cmd_translate,
    "xcheck": cmd_xcheck, "bi": cmd_bi, "selftest": cmd_selftest,
}


def _fail(json_mode, code, kind, message):
    if json_mode:
        print(json.dumps({"error": kind, "message": message, "exit": code}, indent=2, sort_keys=True))
    else:
        print(f"rslcheck: {kind}: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    json_mode = "--json" in argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(json_mode, EXIT_USAGE, "usage", str(exc))
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(args.json, EXIT_USAGE, "usage", str(exc))
    except INPUT_ERRORS as exc:
        return _fail(args.json, EXIT_USAGE, type(exc).__name__, str(exc))
    except RSLError as exc:
        return _fail(args.json, EXIT_INTERNAL, type(exc).__name__, str(exc))
    except Exception as exc:  # noqa: BLE001 - any other crash breaks an invariant
        return _fail(args.json, EXIT_INTERNAL, "internal", f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
