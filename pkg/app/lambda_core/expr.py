"""
λ-term syntax tree with integer literals and primitive arithmetic
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

PRIM_OPS = ("add", "sub", "mul", "eq")
RESERVED = frozenset(PRIM_OPS) | {"ifzero"}

_SUFFIX = re.compile(r"^(.*?)(\d+)$")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Abs:
    param: str
    body: "Expr"


@dataclass(frozen=True)
class App:
    fn: "Expr"
    arg: "Expr"


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Prim:
    op: str
    args: tuple["Expr", ...]

    def __post_init__(self):
        if self.op not in PRIM_OPS:
            raise ValueError(f"unknown primitive: {self.op}")
        if len(self.args) != 2:
            raise ValueError(f"primitive {self.op} takes 2 arguments, got {len(self.args)}")


@dataclass(frozen=True)
class IfZero:
    cond: "Expr"
    then: "Expr"
    else_: "Expr"


Expr = Union[Var, Abs, App, IntLit, Prim, IfZero]


def children(e: Expr) -> Iterator[tuple[str, Expr]]:
    """Yield (path step, subterm) pairs in left-to-right order."""
    if isinstance(e, Abs):
        yield "body", e.body
    elif isinstance(e, App):
        yield "fn", e.fn
        yield "arg", e.arg
    elif isinstance(e, Prim):
        for i, a in enumerate(e.args):
            yield f"args{i}", a
    elif isinstance(e, IfZero):
        yield "cond", e.cond
        yield "then", e.then
        yield "else", e.else_


def free_vars(e: Expr) -> frozenset[str]:
    """Exact set of free variable names."""
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Abs):
        return free_vars(e.body) - {e.param}
    if isinstance(e, IntLit):
        return frozenset()
    out: frozenset[str] = frozenset()
    for _, sub in children(e):
        out |= free_vars(sub)
    return out


def all_names(e: Expr) -> set[str]:
    """Every identifier occurring in e, bound or free."""
    if isinstance(e, Var):
        return {e.name}
    names = {e.param} if isinstance(e, Abs) else set()
    for _, sub in children(e):
        names |= all_names(sub)
    return names


def split_suffix(name: str) -> tuple[str, int]:
    m = _SUFFIX.match(name)
    if m and m.group(1):
        return m.group(1), int(m.group(2))
    return name, 0


def fresh_name(base: str, *terms: Expr) -> str:
    """Base name plus a numeric suffix above any suffix used in the given terms."""
    stem, _ = split_suffix(base)
    top = 0
    for t in terms:
        for n in all_names(t):
            top = max(top, split_suffix(n)[1])
    return f"{stem}{top + 1}"


def alpha_equivalent(a: Expr, b: Expr) -> bool:
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Expr, b: Expr, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        la, lb = env_a.get(a.name), env_b.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if isinstance(a, Abs) and isinstance(b, Abs):
        return _alpha(
            a.body,
            b.body,
            {**env_a, a.param: depth},
            {**env_b, b.param: depth},
            depth + 1,
        )
    if isinstance(a, IntLit) and isinstance(b, IntLit):
        return a.value == b.value
    if type(a) is not type(b):
        return False
    if isinstance(a, Prim) and a.op != b.op:
        return False
    return all(
        _alpha(x, y, env_a, env_b, depth)
        for (_, x), (_, y) in zip(children(a), children(b))
    )


def size(e: Expr) -> int:
    return 1 + sum(size(sub) for _, sub in children(e))
