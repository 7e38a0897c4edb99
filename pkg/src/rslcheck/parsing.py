"""Text formats: game trees, strategies, formulas and specifications.

Game tree, one declaration per line (``#`` starts a comment)::

    state <id> | root <id> | edge <src> <action> <dst> | turn <state> <1|2>
    prop <state> <name> | payoff <state> <int> <int> | action <id>

``action`` lines are optional; they add moves to the alphabet that label no
edge.  Strategy files start with ``player <1|2>`` followed by
``at <state>: <a>[,<b>...]`` lines (``at s: -`` for the empty set).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SpecError
from .game import GameTree, Strategy, natural_key, validate_model
from .syntax import (
    FALSE, TRUE, And, Both, Diamond, Either, Ensures, IfThen, Not, Prop, Restrict,
    Suggests, check_formula, check_spec, format_formula, format_spec, is_basic,
)

IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
KEYWORDS = frozenset({"true", "false", "sug"})


# -- game trees and strategies ---------------------------------------------------

def _fields(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ident(tok, lineno, what):
    if not IDENT.match(tok):
        raise ParseError(f"invalid {what} {tok!r}", lineno)
    return tok


def parse_model(text: str, validate: bool = True) -> GameTree:
    decls = []
    for lineno, words in _fields(text):
        kw, args = words[0], words[1:]
        arity = {"state": 1, "root": 1, "edge": 3, "turn": 2, "prop": 2, "payoff": 3, "action": 1}
        if kw not in arity:
            raise ParseError(f"unknown declaration {kw!r}, expected one of {sorted(arity)}", lineno, 1)
        if len(args) != arity[kw]:
            raise ParseError(f"'{kw}' takes {arity[kw]} argument(s), got {len(args)}", lineno)
        decls.append((lineno, kw, args))

    states, root, root_line = [], None, None
    for lineno, kw, args in decls:
        if kw == "state":
            states.append(_ident(args[0], lineno, "state"))
        elif kw == "root":
            if root is not None:
                raise ParseError(f"second root declaration (first at line {root_line})", lineno)
            root, root_line = _ident(args[0], lineno, "state"), lineno
    if root is None:
        raise ParseError("missing root declaration", 1 if not decls else decls[-1][0])
    declared = set(states)

    def known(tok, lineno):
        if tok not in declared:
            raise ParseError(f"undeclared state {tok!r}", lineno)
        return tok

    known(root, root_line)
    edges, turn, props, payoffs, actions = {}, {}, {}, {}, set()
    for lineno, kw, args in decls:
        if kw == "edge":
            src, act, dst = known(args[0], lineno), _ident(args[1], lineno, "action"), known(args[2], lineno)
            if (src, act) in edges:
                raise ParseError(f"second {act!r} edge out of {src!r}", lineno)
            edges[(src, act)] = dst
            actions.add(act)
        elif kw == "turn":
            s = known(args[0], lineno)
            if args[1] not in ("1", "2"):
                raise ParseError(f"player must be 1 or 2, got {args[1]!r}", lineno)
            turn[s] = int(args[1])
        elif kw == "prop":
            props.setdefault(known(args[0], lineno), set()).add(_ident(args[1], lineno, "proposition"))
        elif kw == "payoff":
            s = known(args[0], lineno)
            try:
                payoffs[s] = (int(args[1]), int(args[2]))
            except ValueError:
                raise ParseError("payoffs must be integers", lineno) from None
        elif kw == "action":
            actions.add(_ident(args[0], lineno, "action"))

    tree = GameTree(
        states=frozenset(states),
        root=root,
        edges=edges,
        turn=turn,
        actions=frozenset(actions),
        valuation={s: frozenset(props.get(s, ())) for s in states},
        payoffs=payoffs or None,
    )
    if validate:
        diags = validate_model(tree)
        if diags:
            lines = {}
            for lineno, kw, args in decls:
                if kw == "state":
                    lines.setdefault(args[0], lineno)
            first = diags[0]
            raise ParseError("; ".join(str(d) for d in diags), lines.get(first.state))
    return tree


def format_model(tree: GameTree) -> str:
    out = []
    order = sorted(tree.states, key=natural_key)
    out.extend(f"state {s}" for s in order)
    out.append(f"root {tree.root}")
    used = {a for (_, a) in tree.edges}
    out.extend(f"action {a}" for a in sorted(tree.actions - used, key=natural_key))
    for s in order:
        if s in tree.turn:
            out.append(f"turn {s} {tree.turn[s]}")
    for s in order:
        for a, t in sorted(tree.children.get(s, {}).items(), key=lambda kv: natural_key(kv[0])):
            out.append(f"edge {s} {a} {t}")
    for s in order:
        out.extend(f"prop {s} {p}" for p in sorted(tree.props_at(s)))
    if tree.payoffs:
        for s in order:
            if s in tree.payoffs:
                u, v = tree.payoffs[s]
                out.append(f"payoff {s} {u} {v}")
    return "\n".join(out) + "\n"


def parse_strategy(text: str) -> Strategy:
    player = None
    assignment = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if player is None:
            m = re.fullmatch(r"player\s+([12])", line)
            if not m:
                raise ParseError("strategy must start with 'player <1|2>'", lineno, 1)
            player = int(m.group(1))
            continue
        m = re.fullmatch(r"at\s+([A-Za-z0-9_]+)\s*:\s*(.*)", line)
        if not m:
            raise ParseError("expected 'at <state>: <action>[,<action>...]'", lineno, 1)
        state, rest = m.group(1), m.group(2).strip()
        if state in assignment:
            raise ParseError(f"second assignment for state {state!r}", lineno)
        if rest == "-":
            acts = frozenset()
        else:
            parts = [p.strip() for p in rest.split(",")]
            for p in parts:
                if not IDENT.match(p):
                    raise ParseError(f"invalid action {p!r}", lineno)
            acts = frozenset(parts)
        assignment[state] = acts
    if player is None:
        raise ParseError("empty strategy: missing 'player' line", 1)
    return Strategy(player, assignment)


def format_strategy(mu: Strategy) -> str:
    out = [f"player {mu.player}"]
    for s in sorted(mu.assignment, key=natural_key):
        acts = sorted(mu.assignment[s], key=natural_key)
        out.append(f"at {s}: {','.join(acts) if acts else '-'}")
    return "\n".join(out) + "\n"


# -- formulas and specifications ---------------------------------------------------

TOKEN = re.compile(r"\s*(?:(~>|->)|([~&|()\[\]<>^+.!:])|([A-Za-z0-9_]+))")


@dataclass
class Token:
    kind: str  # "sym", "id" or "eof"
    text: str
    col: int


def tokenize(text: str) -> list:
    toks, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        start = m.start(m.lastindex)
        if m.group(3) is not None:
            toks.append(Token("id", m.group(3), start + 1))
        else:
            toks.append(Token("sym", m.group(m.lastindex), start + 1))
        pos = m.end()
    toks.append(Token("eof", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.pos = 0
        self.spec_err = None

    @property
    def tok(self):
        return self.toks[self.pos]

    def peek(self, k=1):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def fail(self, expected):
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"expected {expected}, found {found}", 1, tok.col)

    def expect(self, text):
        if self.tok.kind != "sym" or self.tok.text != text:
            self.fail(repr(text))
        self.pos += 1

    def at(self, text):
        return self.tok.kind == "sym" and self.tok.text == text

    def name(self, what):
        tok = self.tok
        if tok.kind != "id" or tok.text in KEYWORDS:
            self.fail(what)
        self.pos += 1
        return tok.text

    def player(self):
        tok = self.tok
        if tok.kind != "id" or tok.text not in ("1", "2"):
            self.fail("player 1 or 2")
        self.pos += 1
        return int(tok.text)

    def end(self):
        if self.tok.kind != "eof":
            self.fail("end of input")

    # formula := ... | spec "~>" player ":" formula
    def formula(self):
        tok = self.tok
        if tok.kind == "id":
            self.pos += 1
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            if tok.text == "sug":
                spec = self.spec()
                self.expect(":")
                player = self.player()
                self.expect(":")
                return Suggests(spec, player, self.name("action"))
            return Prop(tok.text)
        if tok.kind == "sym" and tok.text in ("(", "["):
            ensures = self._try_ensures()
            if ensures is not None:
                return ensures
            if tok.text == "[":
                spec_err, self.spec_err = self.spec_err, None
                self.pos += 1
                try:
                    act = self.name("action")
                    self.expect("]")
                except ParseError as exc:
                    # report whichever reading got further
                    if spec_err is not None and (spec_err.column or 0) > (exc.column or 0):
                        raise spec_err from None
                    raise
                return Not(Diamond(act, Not(self.formula())))
            self.pos += 1
            left = self.formula()
            if self.at("&"):
                self.pos += 1
                right = self.formula()
                self.expect(")")
                return And(left, right)
            if self.at("|"):
                self.pos += 1
                right = self.formula()
                self.expect(")")
                return Not(And(Not(left), Not(right)))
            self.fail("'&' or '|'")
        if tok.kind == "sym" and tok.text == "~":
            self.pos += 1
            return Not(self.formula())
        if tok.kind == "sym" and tok.text == "<":
            self.pos += 1
            act = self.name("action")
            self.expect(">")
            return Diamond(act, self.formula())
        self.fail("a formula")

    def _try_ensures(self):
        start = self.pos
        self.spec_err = None
        try:
            spec = self.spec()
        except ParseError as exc:
            self.pos, self.spec_err = start, exc
            return None
        except SpecError:
            self.pos = start
            return None
        if not self.at("~>"):
            self.pos = start
            return None
        self.pos += 1
        player = self.player()
        self.expect(":")
        return Ensures(spec, player, self.formula())

    def spec(self):
        if self.at("["):
            self.pos += 1
            cond = self.formula()
            self.expect("->")
            act = self.name("action")
            self.expect("]")
            self.expect("^")
            return IfThen(cond, act, self.player())
        if self.at("("):
            self.pos += 1
            left = self.spec()
            if self.at("+") or self.at("."):
                op = self.tok.text
                self.pos += 1
                right = self.spec()
                self.expect(")")
                return Either(left, right) if op == "+" else Both(left, right)
            if self.at("!"):
                self.pos += 1
                act = self.name("action")
                self.expect(")")
                self.expect("^")
                return Restrict(left, act, self.player())
            self.fail("'+', '.' or '!'")
        self.fail("a specification")


def parse_formula(text: str):
    p = _Parser(text)
    f = p.formula()
    p.end()
    check_formula(f)
    return f


def parse_spec(text: str):
    p = _Parser(text)
    s = p.spec()
    p.end()
    check_spec(s)
    return s


__all__ = [
    "parse_model", "format_model", "parse_strategy", "format_strategy",
    "parse_formula", "parse_spec", "format_formula", "format_spec", "tokenize", "is_basic",
]
