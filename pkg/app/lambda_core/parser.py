"""
Recursive-descent parser for λ-terms
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from app.errors import ExprSyntaxError
from app.lambda_core.expr import PRIM_OPS, Abs, App, Expr, IfZero, IntLit, Prim, Var

_TOKEN = re.compile(
    r"\s*(?:(?P<lam>[\\λ])|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*))"
)

_ARITY = {**{op: 2 for op in PRIM_OPS}, "ifzero": 3}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.lastgroup is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        toks.append(_Tok(m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            want = {"dot": "'.'", "rp": "')'", "ident": "identifier", "eof": "end of input"}
            raise ExprSyntaxError(f"expected {want.get(kind, kind)}", tok.pos)
        self.i += 1
        return tok

    def expr(self) -> Expr:
        if self.peek().kind == "lam":
            return self.abstraction()
        return self.application()

    def abstraction(self) -> Expr:
        self.take("lam")
        params = [self.take("ident")]
        while self.peek().kind == "ident":
            params.append(self.take("ident"))
        for p in params:
            if p.text in _ARITY:
                raise ExprSyntaxError(f"reserved name {p.text!r} cannot be bound", p.pos)
        self.take("dot")
        body = self.expr()
        for p in reversed(params):
            body = Abs(p.text, body)
        return body

    def application(self) -> Expr:
        start = self.peek()
        items: list[tuple[_Tok, Expr | None]] = []
        while self.peek().kind in ("ident", "int", "lp", "lam"):
            tok = self.peek()
            if tok.kind == "lam":
                # a trailing abstraction extends as far right as possible
                items.append((tok, self.abstraction()))
                break
            if tok.kind == "ident" and tok.text in _ARITY:
                self.i += 1
                items.append((tok, None))
                continue
            items.append((tok, self.atom()))
        if not items:
            raise ExprSyntaxError("expected expression", start.pos)
        return self._build(items)

    def _build(self, items: list[tuple[_Tok, Expr | None]]) -> Expr:
        # Left-associative spine; reserved heads consume their fixed arity.
        result: Expr | None = None
        j = 0
        while j < len(items):
            tok, e = items[j]
            if e is None:
                arity = _ARITY[tok.text]
                args = [a for _, a in items[j + 1 : j + 1 + arity]]
                if len(args) < arity or any(a is None for a in args):
                    raise ExprSyntaxError(
                        f"{tok.text} expects {arity} arguments", tok.pos
                    )
                if tok.text == "ifzero":
                    e = IfZero(args[0], args[1], args[2])
                else:
                    e = Prim(tok.text, (args[0], args[1]))
                j += arity
            result = e if result is None else App(result, e)
            j += 1
        assert result is not None
        return result

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "int":
            self.i += 1
            return IntLit(int(tok.text))
        if tok.kind == "lp":
            self.i += 1
            inner = self.expr()
            self.take("rp")
            return inner
        raise ExprSyntaxError("expected expression", tok.pos)


def parse_expr(text: str) -> Expr:
    """
    Parse source text into an Expr.

    Application associates left, λ may be written as `\\` or `λ`, and a binder
    list `\\x y. e` abbreviates nested abstractions.

    Raises:
        ExprSyntaxError: with the 0-based position of the offending token
    """
    p = _Parser(text)
    e = p.expr()
    p.take("eof")
    return e
