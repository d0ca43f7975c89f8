"""Hand-written recursive-descent parsers for types, terms and repository files."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

from . import lambda_r as lr
from . import types_tt as tt
from . import types_ttc as ttc


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        super().__init__(f"{line}:{column}: {message}" if line else message)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<tvar>'[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>->|\+\+|==|→|∩|ω|▷|λ|[&+<>(){}:;,.=\\|])
    """,
    re.VERBOSE,
)

_ALIASES = {"→": "->", "∩": "&", "ω": "omega", "▷": "|", "λ": "\\"}


def tokenize(text: str) -> list[Token]:
    out, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind != "ws":
            if kind == "sym":
                s = _ALIASES.get(s, s)
                if s == "omega":
                    kind = "ident"
            out.append(Token(kind, s, line, col))
        nl = s.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(m.group())
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "ident")

    def error(self, msg: str) -> ParseError:
        t = self.tok
        found = t.text or "end of input"
        return ParseError(f"{msg}, found {found!r}", t.line, t.column)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected {what}")
        return self.advance().text

    def end(self) -> None:
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")

    # TT types

    def tt_type(self) -> tt.Type:
        t = self.tt_arrow()
        while self.accept("++"):
            t = tt.RecordMerge(t, self.tt_arrow())
        return t

    def tt_arrow(self) -> tt.Type:
        t = self.tt_inter()
        if self.accept("->"):
            return tt.Arrow(t, self.tt_arrow())
        return t

    def tt_inter(self) -> tt.Type:
        t = self.tt_atom()
        while self.accept("&"):
            t = tt.Intersection(t, self.tt_atom())
        return t

    def tt_atom(self) -> tt.Type:
        if self.accept("("):
            t = self.tt_type()
            self.expect(")")
            return t
        if self.accept("<"):
            fields = []
            while not self.at(">"):
                label = self.ident("label")
                self.expect(":")
                fields.append((label, self.tt_type()))
                if not self.accept(","):
                    break
            self.expect(">")
            labels = [l for l, _ in fields]
            if len(set(labels)) != len(labels):
                raise self.error("duplicate label in record type")
            return tt.record(fields)
        name = self.ident("type")
        if self.at("("):
            raise self.error(f"constructor {name}(...) is not a record-calculus type")
        return tt.OMEGA if name == "omega" else tt.Constant(name)

    # TTC types

    def ttc_type(self) -> ttc.Type:
        t = self.ttc_inter()
        if self.accept("->"):
            return ttc.Arrow(t, self.ttc_type())
        return t

    def ttc_inter(self) -> ttc.Type:
        t = self.ttc_atom()
        while self.accept("&"):
            t = ttc.Intersection(t, self.ttc_atom())
        return t

    def ttc_atom(self) -> ttc.Type:
        if self.accept("("):
            t = self.ttc_type()
            self.expect(")")
            return t
        if self.tok.kind == "tvar":
            return ttc.Variable(self.advance().text[1:])
        if self.accept("<"):
            # record brackets as sugar for rec(l(...)), so goals may mix both notations
            fields = []
            while not self.at(">"):
                label = self.ident("label")
                self.expect(":")
                fields.append(ttc.Ctor(label, self.ttc_type()))
                if not self.accept(","):
                    break
            self.expect(">")
            return ttc.Ctor("rec", ttc.intersect(fields))
        name = self.ident("type")
        if name == "omega":
            return ttc.OMEGA
        if self.accept("("):
            t = self.ttc_type()
            self.expect(")")
            return ttc.Ctor(name, t)
        return ttc.Constant(name)

    # terms

    def term(self) -> lr.Term:
        if self.accept("\\"):
            binders = [self.ident("binder")]
            while not self.at("."):
                binders.append(self.ident("binder"))
            self.expect(".")
            body = self.term()
            for b in reversed(binders):
                body = lr.Abstraction(b, body)
            return body
        if self.accept("let"):
            name = self.ident("binder")
            self.expect("=")
            value = self.term()
            self.expect("in")
            return lr.let(name, value, self.term())
        return self.merge()

    def merge(self) -> lr.Term:
        t = self.equality()
        while self.accept("++"):
            if not self.at("<"):
                raise self.error("the right operand of ++ must be a record literal")
            t = lr.MergeTerm(t, self.record())
        return t

    def equality(self) -> lr.Term:
        t = self.addition()
        if self.accept("=="):
            t = lr.apply(lr.EQ, t, self.addition())
        return t

    def addition(self) -> lr.Term:
        t = self.application()
        while self.at("+"):
            self.advance()
            t = lr.apply(lr.PLUS, t, self.application())
        return t

    def application(self) -> lr.Term:
        t = self.postfix()
        while self._starts_atom():
            t = lr.Application(t, self.postfix())
        return t

    def _starts_atom(self) -> bool:
        k = self.tok
        if k.kind in ("int", "string"):
            return True
        if k.kind == "ident":
            return k.text not in ("in", "let")
        return k.kind == "sym" and k.text in ("(", "<")

    def postfix(self) -> lr.Term:
        t = self.atom()
        while self.accept("."):
            t = lr.Selection(t, self.ident("label"))
        return t

    def atom(self) -> lr.Term:
        k = self.tok
        if k.kind == "int":
            self.advance()
            return lr.PrimInt(int(k.text))
        if k.kind == "string":
            self.advance()
            return lr.PrimString(re.sub(r"\\(.)", r"\1", k.text[1:-1]))
        if self.at("<"):
            return self.record()
        if self.accept("("):
            if self.accept("+"):
                self.expect(")")
                return lr.PLUS
            if self.accept("=="):
                self.expect(")")
                return lr.EQ
            t = self.term()
            self.expect(")")
            return t
        name = self.ident("term")
        if name == "Y":
            return lr.FIX
        if name in ("true", "false"):
            return lr.PrimBool(name == "true")
        return lr.Var(name)

    def record(self) -> lr.RecordLit:
        self.expect("<")
        entries = []
        while not self.at(">"):
            label = self.ident("label")
            self.expect("=")
            entries.append((label, self.term()))
            if not self.accept(","):
                break
        self.expect(">")
        if len({l for l, _ in entries}) != len(entries):
            raise self.error("duplicate label in record literal")
        return lr.RecordLit(tuple(entries))


def _whole(text: str, rule: Callable[[_Parser], object]):
    p = _Parser(text)
    out = rule(p)
    p.end()
    return out


def parse_tt(text: str) -> tt.Type:
    return _whole(text, _Parser.tt_type)


def parse_ttc(text: str) -> ttc.Type:
    return _whole(text, _Parser.ttc_type)


def parse_term(text: str) -> lr.Term:
    return _whole(text, _Parser.term)


# pipelines ------------------------------------------------------------------


def parse_pipeline(text: str):
    """``A | B | C`` (or with ▷) and plain applications ``(f x)``."""
    from .inhabitation import Apply, Leaf

    p = _Parser(text)

    def app():
        t = atom()
        while p.tok.kind == "ident" or p.at("("):
            t = Apply(t, atom())
        return t

    def atom():
        if p.accept("("):
            t = pipe()
            p.expect(")")
            return t
        return Leaf(p.ident("combinator"))

    def pipe():
        t = app()
        while p.accept("|"):
            t = Apply(app(), t)
        return t

    out = pipe()
    p.end()
    return out


# repository files -----------------------------------------------------------


@dataclass
class SourceFile:
    labels: Optional[tuple[str, ...]]
    classes: list[lr.ClassDecl]
    mixins: list[lr.MixinDecl]
    prims: lr.PrimTable


def parse_source(text: str) -> SourceFile:
    p = _Parser(text)
    labels = None
    classes, mixins = [], []
    prims = lr.STANDARD
    names: set[str] = set()
    while p.tok.kind != "eof":
        if p.accept("labels"):
            p.expect("{")
            labels = [p.ident("label")]
            while p.accept(","):
                labels.append(p.ident("label"))
            p.expect("}")
            labels = tuple(labels)
        elif p.accept("axioms"):
            prims = _axioms(p)
        elif p.at("class") or p.at("mixin"):
            kind = p.advance().text
            start = p.tok
            name = p.ident("declaration name")
            if name in names:
                raise ParseError(f"duplicate declaration {name}", start.line, start.column)
            names.add(name)
            if kind == "class":
                state = None
                if p.accept("state"):
                    p.expect(":")
                    state = p.tt_type()
                classes.append(lr.ClassDecl(name, state, _methods(p)))
            else:
                p.expect("state")
                p.expect(":")
                state = p.tt_type()
                p.expect("requires")
                req = p.tt_type()
                prov = p.tt_type() if p.accept("provides") else None
                methods = _methods(p)
                if prov is None:
                    if any(m.declared is None for m in methods):
                        raise ParseError(
                            f"mixin {name} needs declared method types or a provides clause",
                            start.line, start.column,
                        )
                    prov = tt.record((m.label, m.declared) for m in methods)
                mixins.append(lr.MixinDecl(name, state, req, methods, prov))
        else:
            raise p.error("expected 'labels', 'axioms', 'class' or 'mixin'")
    return SourceFile(labels, classes, mixins, prims)


def _methods(p: _Parser) -> tuple[lr.Method, ...]:
    p.expect("{")
    out = []
    while not p.accept("}"):
        label = p.ident("method label")
        declared = p.tt_type() if p.accept(":") else None
        p.expect("=")
        body = p.term()
        p.expect(";")
        if label in {m.label for m in out}:
            raise p.error(f"duplicate method {label}")
        out.append(lr.Method(label, body, declared))
    return tuple(out)


def _axioms(p: _Parser) -> lr.PrimTable:
    p.expect("{")
    table = {}
    while not p.accept("}"):
        key = p.ident("axiom name")
        p.expect(":")
        if key == "literals":
            mode = p.ident("literal mode")
            if mode not in ("plain", "parity"):
                raise p.error("literal mode is 'plain' or 'parity'")
            table["parity"] = mode == "parity"
        elif key in ("plus", "eq"):
            table[key] = p.tt_type()
        else:
            raise p.error("axioms are plus, eq and literals")
        p.expect(";")
    return lr.PrimTable(**table)
