"""Surface syntax for CIL and BL, with printers that parse back.

CIL programs are ``.``-terminated statements::

    # Mary knows that she loves herself
    prim K : 2.  prim L : 2.  prim M : -1.
    let mary = comb[0](link[{1,2}](comb[*,1](K, link[{1,2}](L))), M).
    mary.

Terms: primitive names, ``?X`` pseudo-variables, ``comb[*,1](H, A...)``,
``link[{1,3},{2}](T)`` (blocks not listed are singletons), ``per[2,1](T)``,
``dum[0,1](T)``, ``not(T)``, ``and(T, U)``, ``ex[0,1](T)``.

BL formulas: ``P(t, ...)``, ``~f``, ``f & g``, ``f | g``, ``f -> g``,
``f <-> g``, ``all x y. f``, ``ex x. f``, ``t =i s``, ``t =n s``; terms are
variables, constants (names declared with sort -1) and abstracts
``[f]_{x y}``, ``[f]_x`` or ``[f]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import bl
from .seqcomb import STAR, CombSeq, DumSeq, LinkSeq, PerSeq, SequenceError
from .terms import (EQ_I, EQ_N, Comb, Conj, Dum, Ex, Link, Neg, Per, Prim,
                    PseudoVar, Signature, SortError, show)


class ParseError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col, self.pos = line, col, pos


_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow><->|->)
  | (?P<eq>=i\b|=n\b)
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*'*)
  | (?P<punct>[\[\]{}(),.:;?*~&|=_])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Tok(kind, m.group(), pos))
        pos = m.end()
    out.append(Tok("eof", "", len(text)))
    return out


class _Stream:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Tok | None = None):
        tok = tok or self.cur
        return ParseError(msg, self.text, tok.pos)

    def next(self) -> Tok:
        t = self.cur
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.cur.text == text and self.cur.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Tok:
        if self.cur.text != text:
            raise self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")
        return self.next()

    def name(self) -> str:
        if self.cur.kind != "name":
            raise self.error(f"expected a name, found {self.cur.text or 'end of input'!r}")
        return self.next().text

    def integer(self) -> int:
        if self.cur.kind != "int":
            raise self.error(f"expected an integer, found {self.cur.text or 'end of input'!r}")
        return int(self.next().text)


# ---------------------------------------------------------------------------
# CIL


KEYWORDS = {"comb", "link", "per", "dum", "not", "and", "ex", "prim", "let"}


@dataclass
class Program:
    sig: Signature
    bindings: dict = field(default_factory=dict)
    terms: list = field(default_factory=list)

    @property
    def main(self):
        if self.terms:
            return self.terms[-1]
        if self.bindings:
            return list(self.bindings.values())[-1]
        raise ParseError("no term in input")


def parse_program(text: str, sig: Signature | None = None, bindings: dict | None = None) -> Program:
    st = _Stream(text)
    prog = Program(sig or Signature(), dict(bindings or {}))
    while st.cur.kind != "eof":
        if st.cur.text == "prim":
            st.next()
            tok = st.cur
            name = st.name()
            if name in KEYWORDS:
                raise st.error(f"{name} is a keyword", tok)
            st.expect(":")
            sort = st.integer()
            try:
                prog.sig = prog.sig.declare(name, sort)
            except SortError as exc:
                raise SortError(f"{ParseError(str(exc), text, tok.pos)}") from None
        elif st.cur.text == "let":
            st.next()
            name = st.name()
            st.expect("=")
            prog.bindings[name] = _cil_term(st, prog)
        else:
            prog.terms.append(_cil_term(st, prog))
        if not (st.accept(".") or st.accept(";")) and st.cur.kind != "eof":
            raise st.error(f"expected '.' after statement, found {st.cur.text!r}")
    return prog


def parse_cil(text: str, sig: Signature | None = None, bindings: dict | None = None):
    """Parse a program and return its last term."""
    return parse_program(text, sig, bindings).main


def _build(st: _Stream, tok: Tok, ctor, *args):
    try:
        return ctor(*args)
    except (SortError, SequenceError) as exc:
        raise SortError(str(ParseError(str(exc), st.text, tok.pos))) from None


def _cil_term(st: _Stream, prog: Program):
    tok = st.cur
    if st.accept("?"):
        return PseudoVar(st.name())
    name = st.name()
    if name == "comb":
        st.expect("[")
        entries = []
        if st.cur.text != "]":
            while True:
                if st.accept("*"):
                    entries.append(STAR)
                else:
                    entries.append(st.integer())
                if not st.accept(","):
                    break
        st.expect("]")
        if not entries:
            raise st.error("empty comb-sequence", tok)
        st.expect("(")
        parts = [_cil_term(st, prog)]
        while st.accept(","):
            parts.append(_cil_term(st, prog))
        st.expect(")")
        seq = _build(st, tok, CombSeq, tuple(entries))
        return _build(st, tok, Comb, seq, parts[0], tuple(parts[1:]))
    if name == "link":
        st.expect("[")
        blocks = []
        while st.cur.text == "{":
            st.next()
            block = [st.integer()]
            while st.accept(","):
                block.append(st.integer())
            st.expect("}")
            blocks.append(block)
            if not st.accept(","):
                break
        st.expect("]")
        body = _paren_term(st, prog)
        if isinstance(body, PseudoVar):
            raise SortError(str(ParseError("link of a pseudo-variable", st.text, tok.pos)))
        seq = _build(st, tok, LinkSeq.of, blocks, body.sort)
        return _build(st, tok, Link, seq, body)
    if name in ("per", "dum"):
        st.expect("[")
        vals = [st.integer()]
        while st.accept(","):
            vals.append(st.integer())
        st.expect("]")
        body = _paren_term(st, prog)
        seq = _build(st, tok, PerSeq if name == "per" else DumSeq, tuple(vals))
        return _build(st, tok, Per if name == "per" else Dum, seq, body)
    if name == "ex":
        st.expect("[")
        vals = [st.integer()]
        while st.accept(","):
            vals.append(st.integer())
        st.expect("]")
        body = _paren_term(st, prog)
        return _build(st, tok, Ex, tuple(vals), body)
    if name == "not":
        return _build(st, tok, Neg, _paren_term(st, prog))
    if name == "and":
        st.expect("(")
        a = _cil_term(st, prog)
        st.expect(",")
        b = _cil_term(st, prog)
        st.expect(")")
        return _build(st, tok, Conj, a, b)
    if name in prog.bindings:
        return prog.bindings[name]
    if name in prog.sig:
        return Prim(name, prog.sig[name])
    raise SortError(str(ParseError(f"undeclared primitive {name}", st.text, tok.pos)))


def _paren_term(st: _Stream, prog: Program):
    st.expect("(")
    t = _cil_term(st, prog)
    st.expect(")")
    return t


def declarations(sig: Signature, only=None) -> str:
    names = sorted(only) if only is not None else sorted(sig.user_entries())
    return " ".join(f"prim {n} : {sig[n]}." for n in names)


def print_program(t, sig: Signature | None = None) -> str:
    """Declarations for the primitives ``t`` uses, then ``t``."""
    from .terms import prims
    ps = sorted(prims(t), key=lambda p: p.name)
    decls = " ".join(f"prim {p.name} : {p.sort}." for p in ps
                     if p.name not in ("Eq_I", "Eq_N", "Truth"))
    return (decls + "\n" if decls else "") + show(t) + "."


# ---------------------------------------------------------------------------
# BL


def parse_bl(text: str, sig: Signature | None = None, constants=None):
    """Parse a BL term (abstract, variable or constant) or formula.

    Names declared with sort -1 in ``sig`` (or listed in ``constants``) are
    constants; all other argument names are variables.
    """
    consts = set(constants or ())
    if sig is not None:
        consts |= {n for n, s in sig.entries if s == -1}
    st = _Stream(text)
    if st.cur.text == "[" or (st.cur.kind == "name" and st.peek().kind == "eof"):
        try:
            t = _bl_term(st, consts)
            st.accept(".")
            if st.cur.kind == "eof":
                return t
        except ParseError:
            pass
        st.i = 0
    f = _bl_formula(st, consts)
    st.accept(".")
    if st.cur.kind != "eof":
        raise st.error(f"unexpected {st.cur.text!r}")
    return f


def _bl_formula(st: _Stream, consts) -> bl.Formula:
    left = _bl_imp(st, consts)
    while st.accept("<->"):
        left = bl.iff(left, _bl_imp(st, consts))
    return left


def _bl_imp(st, consts):
    left = _bl_or(st, consts)
    if st.accept("->"):
        return bl.implies(left, _bl_imp(st, consts))
    return left


def _bl_or(st, consts):
    left = _bl_and(st, consts)
    while st.accept("|"):
        left = bl.disj(left, _bl_and(st, consts))
    return left


def _bl_and(st, consts):
    left = _bl_unary(st, consts)
    while st.accept("&"):
        left = bl.And(left, _bl_unary(st, consts))
    return left


def _bl_unary(st, consts):
    if st.accept("~"):
        return bl.Not(_bl_unary(st, consts))
    if st.cur.text in ("all", "ex") and st.peek().kind == "name":
        q = st.next().text
        names = []
        while st.cur.kind == "name":
            names.append(st.next().text)
        st.expect(".")
        body = _bl_formula(st, consts)
        return (bl.Forall if q == "all" else bl.Exists)(tuple(names), body)
    if st.cur.text == "(":
        st.next()
        f = _bl_formula(st, consts)
        st.expect(")")
        return f
    if st.cur.kind == "name" and st.peek().text == "(":
        name = st.next().text
        st.expect("(")
        args = []
        if st.cur.text != ")":
            args.append(_bl_term(st, consts))
            while st.accept(","):
                args.append(_bl_term(st, consts))
        st.expect(")")
        return bl.Pred(name, tuple(args))
    left = _bl_term(st, consts)
    tok = st.cur
    if tok.text == "=i":
        st.next()
        return bl.Pred(EQ_I, (left, _bl_term(st, consts)))
    if tok.text == "=n":
        st.next()
        return bl.Pred(EQ_N, (left, _bl_term(st, consts)))
    raise st.error("expected a formula")


def _bl_term(st, consts):
    if st.accept("["):
        body = _bl_formula(st, consts)
        st.expect("]")
        vseq: list[str] = []
        if st.accept("_"):
            if st.accept("{"):
                while st.cur.kind == "name":
                    vseq.append(st.next().text)
                st.expect("}")
            else:
                vseq.append(st.name())
        try:
            return bl.Abstract(body, tuple(vseq))
        except bl.BLError as exc:
            raise st.error(str(exc)) from None
    name = st.name()
    return bl.Const(name) if name in consts else bl.Var(name)


def show_bl(t) -> str:
    if isinstance(t, bl.Var):
        return t.name
    if isinstance(t, bl.Const):
        return t.name
    if isinstance(t, bl.Abstract):
        body = show_bl(t.scope)
        if not t.vseq:
            return f"[{body}]"
        return f"[{body}]_{{{' '.join(t.vseq)}}}"
    if isinstance(t, bl.Pred):
        if t.name in (EQ_I, EQ_N) and len(t.args) == 2:
            op = "=i" if t.name == EQ_I else "=n"
            return f"{show_bl(t.args[0])} {op} {show_bl(t.args[1])}"
        return f"{t.name}(" + ", ".join(show_bl(a) for a in t.args) + ")"
    if isinstance(t, bl.Not):
        return "~" + _bl_atomic(t.body)
    if isinstance(t, bl.And):
        return f"{_bl_atomic(t.left)} & {_bl_atomic(t.right)}"
    if isinstance(t, (bl.Exists, bl.Forall)):
        q = "ex" if isinstance(t, bl.Exists) else "all"
        return f"{q} {' '.join(t.vars)}. {show_bl(t.body)}"
    raise ValueError(f"not a BL term or formula: {t!r}")


def _bl_atomic(f) -> str:
    s = show_bl(f)
    if isinstance(f, (bl.And, bl.Exists, bl.Forall)) or (
            isinstance(f, bl.Pred) and f.name in (EQ_I, EQ_N) and len(f.args) == 2):
        return f"({s})"
    return s
