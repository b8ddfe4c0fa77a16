"""
The pre-verified combinator library: Split, Peek, Map, Filter, Reduce, Concat, Cross
"""

from __future__ import annotations

import re
from collections import Counter
from functools import reduce
from typing import Callable, Iterable, Sequence, TypeVar

from app.errors import EmptyReduce, InvalidSplit, OutOfBounds
from app.runtime.document import Document

A = TypeVar("A")
B = TypeVar("B")

DOC_DELIMITER = "<doc>"

_KEY_PARTS = re.compile(r"[=:]")


def split(doc: Document, k: int) -> list[Document]:
    """
    Partition doc into exactly k contiguous chunks.

    The first chunks take ⌈n/k⌉ tokens each and the last holds what remains;
    trailing chunks are empty only when (k−1)·⌈n/k⌉ ≥ n.
    """
    if k < 1:
        raise InvalidSplit(f"chunk count must be at least 1, got {k}", {"k": k})
    n = len(doc)
    q = -(-n // k)
    return [doc.slice(min(i * q, n), min((i + 1) * q, n)) for i in range(k)]


def chunk_sizes(m: int, k: int) -> list[int]:
    """Sizes produced by split(·, k) on a document of m tokens."""
    q = -(-m // k)
    return [min((i + 1) * q, m) - min(i * q, m) for i in range(k)]


def leaf_sizes(n: int, k: int, d: int) -> Counter[int]:
    """Multiset of chunk sizes after d levels of split(·, k), empty chunks included."""
    level: Counter[int] = Counter({n: 1})
    for _ in range(d):
        below: Counter[int] = Counter()
        for m, mult in level.items():
            for size in chunk_sizes(m, k):
                below[size] += mult
        level = below
    return level


def split_delta(doc: Document, delimiter: str = DOC_DELIMITER) -> list[Document]:
    """Split at delimiter tokens; each piece starts with its delimiter."""
    starts = [i for i, t in enumerate(doc.tokens) if t == delimiter]
    if not starts or starts[0] != 0:
        starts = [0] + starts
    bounds = starts + [len(doc)]
    return [doc.slice(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]


def peek(doc: Document, start: int, end: int) -> Document:
    """Tokens [start, end)."""
    if not 0 <= start <= end <= len(doc):
        raise OutOfBounds(
            f"peek({start}, {end}) outside document of length {len(doc)}",
            {"start": start, "end": end, "n": len(doc)},
        )
    return doc.slice(start, end)


def preview(doc: Document, budget: int) -> Document:
    """Peek at most `budget` leading tokens."""
    return peek(doc, 0, min(budget, len(doc)))


def map_op(f: Callable[[A], B], xs: Iterable[A]) -> list[B]:
    return [f(x) for x in xs]


def filter_op(p: Callable[[A], bool], xs: Iterable[A]) -> list[A]:
    return [x for x in xs if p(x)]


def reduce_op(op: Callable[[B, B], B], xs: Sequence[B]) -> B:
    """Left fold in list order."""
    if not xs:
        raise EmptyReduce("reduce over an empty list")
    return reduce(op, xs)


def concat_op(xs: Sequence[Document]) -> Document:
    sep = xs[0].sep if xs else " "
    return Document(tuple(t for x in xs for t in x.tokens), None, sep)


def cross_op(xs: Sequence[A], ys: Sequence[B]) -> list[tuple[A, B]]:
    return [(x, y) for x in xs for y in ys]


def keywords(doc: Document) -> set[str]:
    """Identifier-like parts (containing a digit) of `key=value` / `key:value` tokens."""
    out: set[str] = set()
    for token in doc.tokens:
        for part in _KEY_PARTS.split(token):
            if any(c.isdigit() for c in part):
                out.add(part)
    return out


def relevant(query_keys: set[str]) -> Callable[[Document], bool]:
    """Symbolic relevance predicate: the preview shares a keyword with the query."""

    def predicate(doc: Document) -> bool:
        return bool(query_keys & keywords(doc))

    return predicate
