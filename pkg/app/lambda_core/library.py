"""
Named terms: the fixed-point combinator and the factorial recipe
"""

from app.lambda_core.expr import App, Expr, IntLit
from app.lambda_core.parser import parse_expr


def y_combinator() -> Expr:
    """Y ≡ λf. (λx. f (x x)) (λx. f (x x))"""
    return parse_expr(r"\f. (\x. f (x x)) (\x. f (x x))")


def g_factorial() -> Expr:
    """Factorial recipe G = λf. λn. if n = 0 then 1 else n · f (n − 1)."""
    return parse_expr(r"\f. \n. ifzero n 1 (mul n (f (sub n 1)))")


def factorial_term(n: int) -> Expr:
    return App(App(y_combinator(), g_factorial()), IntLit(n))


def identity() -> Expr:
    return parse_expr(r"\x. x")


def const() -> Expr:
    return parse_expr(r"\x. \y. x")


def omega() -> Expr:
    return parse_expr(r"(\x. x x) (\x. x x)")
