"""
Untyped λ-calculus core: terms, parser, normal-order reducer
"""

from app.lambda_core.expr import (
    Abs,
    App,
    Expr,
    IfZero,
    IntLit,
    Prim,
    Var,
    alpha_equivalent,
    free_vars,
)
from app.lambda_core.library import (
    const,
    factorial_term,
    g_factorial,
    identity,
    omega,
    y_combinator,
)
from app.lambda_core.parser import parse_expr
from app.lambda_core.reduction import (
    DEFAULT_FUEL,
    ReductionStep,
    ReductionTrace,
    beta_step,
    locate_redex,
    normalize,
    substitute,
)
from app.lambda_core.render import pretty, underline

__all__ = [
    "Abs",
    "App",
    "Expr",
    "IfZero",
    "IntLit",
    "Prim",
    "Var",
    "alpha_equivalent",
    "free_vars",
    "const",
    "factorial_term",
    "g_factorial",
    "identity",
    "omega",
    "y_combinator",
    "parse_expr",
    "DEFAULT_FUEL",
    "ReductionStep",
    "ReductionTrace",
    "beta_step",
    "locate_redex",
    "normalize",
    "substitute",
    "pretty",
    "underline",
]
