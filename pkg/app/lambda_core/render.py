"""
Pretty printing and redex highlighting
"""

from __future__ import annotations

from app.lambda_core.expr import Abs, App, Expr, IfZero, IntLit, Prim, Var

Path = tuple[str, ...]


class _Printer:
    def __init__(self) -> None:
        self.parts: list[str] = []
        self.pos = 0
        self.spans: dict[Path, tuple[int, int]] = {}

    def emit(self, s: str) -> None:
        self.parts.append(s)
        self.pos += len(s)

    def term(self, e: Expr, path: Path) -> None:
        start = self.pos
        if isinstance(e, Var):
            self.emit(e.name)
        elif isinstance(e, IntLit):
            self.emit(str(e.value))
        elif isinstance(e, Abs):
            self.emit(f"λ{e.param}. ")
            self.term(e.body, path + ("body",))
        elif isinstance(e, App):
            self.wrapped(e.fn, path + ("fn",), isinstance(e.fn, (Abs, Prim, IfZero)))
            self.emit(" ")
            self.wrapped(e.arg, path + ("arg",), not _atomic(e.arg))
        elif isinstance(e, Prim):
            self.emit(e.op)
            for i, a in enumerate(e.args):
                self.emit(" ")
                self.wrapped(a, path + (f"args{i}",), not _atomic(a))
        elif isinstance(e, IfZero):
            self.emit("ifzero")
            for step, sub in (("cond", e.cond), ("then", e.then), ("else", e.else_)):
                self.emit(" ")
                self.wrapped(sub, path + (step,), not _atomic(sub))
        self.spans[path] = (start, self.pos)

    def wrapped(self, e: Expr, path: Path, parens: bool) -> None:
        if parens:
            self.emit("(")
        self.term(e, path)
        if parens:
            self.emit(")")


def _atomic(e: Expr) -> bool:
    return isinstance(e, (Var, IntLit))


def pretty(e: Expr) -> str:
    """Re-parseable text with minimal parentheses."""
    p = _Printer()
    p.term(e, ())
    return "".join(p.parts)


def pretty_with_spans(e: Expr) -> tuple[str, dict[Path, tuple[int, int]]]:
    p = _Printer()
    p.term(e, ())
    return "".join(p.parts), p.spans


def underline(e: Expr, path: Path) -> tuple[str, str]:
    """Return the printed term and a caret line marking the subterm at path."""
    text, spans = pretty_with_spans(e)
    start, end = spans.get(path, (0, len(text)))
    return text, " " * start + "^" * max(1, end - start)
