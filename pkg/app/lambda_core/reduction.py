"""
Normal-order β/δ reduction with capture-avoiding substitution
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from app.errors import FuelExhausted
from app.lambda_core.expr import (
    Abs,
    App,
    Expr,
    IfZero,
    IntLit,
    Prim,
    Var,
    free_vars,
    fresh_name,
)

logger = logging.getLogger(__name__)

DEFAULT_FUEL = 10_000

Path = tuple[str, ...]


@dataclass(frozen=True)
class ReductionStep:
    position: Path
    kind: str  # "beta" or "delta"
    before: Expr
    after: Expr


@dataclass
class ReductionTrace:
    steps: list[ReductionStep] = field(default_factory=list)
    terminated: bool = False
    fuel_used: int = 0


def substitute(e: Expr, x: str, a: Expr) -> Expr:
    """e[x := a], renaming binders that would capture a free variable of a."""
    if isinstance(e, Var):
        return a if e.name == x else e
    if isinstance(e, IntLit):
        return e
    if isinstance(e, Abs):
        if e.param == x:
            return e
        if e.param in free_vars(a) and x in free_vars(e.body):
            new = fresh_name(e.param, e, a)
            body = substitute(e.body, e.param, Var(new))
            return Abs(new, substitute(body, x, a))
        return Abs(e.param, substitute(e.body, x, a))
    if isinstance(e, App):
        return App(substitute(e.fn, x, a), substitute(e.arg, x, a))
    if isinstance(e, Prim):
        return Prim(e.op, tuple(substitute(arg, x, a) for arg in e.args))
    if isinstance(e, IfZero):
        return IfZero(substitute(e.cond, x, a), substitute(e.then, x, a), substitute(e.else_, x, a))
    raise TypeError(f"not an Expr: {e!r}")


def _delta(op: str, left: int, right: int) -> int:
    if op == "add":
        return left + right
    if op == "sub":
        return max(0, left - right)
    if op == "mul":
        return left * right
    return 1 if left == right else 0


def _step(e: Expr, path: Path) -> Optional[tuple[Expr, Path, str]]:
    """Contract the leftmost-outermost redex; None when e is normal."""
    if isinstance(e, (Var, IntLit)):
        return None

    if isinstance(e, App):
        if isinstance(e.fn, Abs):
            return substitute(e.fn.body, e.fn.param, e.arg), path, "beta"
        hit = _step(e.fn, path + ("fn",))
        if hit:
            return App(hit[0], e.arg), hit[1], hit[2]
        hit = _step(e.arg, path + ("arg",))
        if hit:
            return App(e.fn, hit[0]), hit[1], hit[2]
        return None

    if isinstance(e, Abs):
        hit = _step(e.body, path + ("body",))
        if hit:
            return Abs(e.param, hit[0]), hit[1], hit[2]
        return None

    if isinstance(e, Prim):
        left, right = e.args
        if isinstance(left, IntLit) and isinstance(right, IntLit):
            return IntLit(_delta(e.op, left.value, right.value)), path, "delta"
        for i, arg in enumerate(e.args):
            hit = _step(arg, path + (f"args{i}",))
            if hit:
                args = list(e.args)
                args[i] = hit[0]
                return Prim(e.op, tuple(args)), hit[1], hit[2]
        return None

    if isinstance(e, IfZero):
        if isinstance(e.cond, IntLit):
            return (e.then if e.cond.value == 0 else e.else_), path, "delta"
        hit = _step(e.cond, path + ("cond",))
        if hit:
            return IfZero(hit[0], e.then, e.else_), hit[1], hit[2]
        # stuck on a free variable: keep normalizing the branches
        hit = _step(e.then, path + ("then",))
        if hit:
            return IfZero(e.cond, hit[0], e.else_), hit[1], hit[2]
        hit = _step(e.else_, path + ("else",))
        if hit:
            return IfZero(e.cond, e.then, hit[0]), hit[1], hit[2]
        return None

    raise TypeError(f"not an Expr: {e!r}")


def beta_step(e: Expr) -> Optional[Expr]:
    """One normal-order β- or δ-step, or None if e is in normal form."""
    hit = _step(e, ())
    return hit[0] if hit else None


def locate_redex(e: Expr) -> Optional[tuple[Path, str]]:
    hit = _step(e, ())
    return (hit[1], hit[2]) if hit else None


def normalize(e: Expr, fuel: int = DEFAULT_FUEL) -> tuple[Expr, ReductionTrace]:
    """
    Reduce to normal form, recording every step.

    Raises:
        FuelExhausted: after `fuel` steps without reaching a normal form; the
            exception carries the partial trace.
    """
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    trace = ReductionTrace()
    current = e
    while True:
        hit = _step(current, ())
        if hit is None:
            trace.terminated = True
            return current, trace
        if trace.fuel_used >= fuel:
            logger.debug(f"normalize: fuel {fuel} exhausted")
            raise FuelExhausted(trace)
        after, position, kind = hit
        trace.steps.append(ReductionStep(position, kind, current, after))
        trace.fuel_used += 1
        current = after
