"""
Textual prompt protocol shared by the executors and every oracle backend

A prompt is a token sequence: a fixed header, optionally a query followed by
the separator token, then the payload.
"""

from __future__ import annotations

from typing import Optional, Sequence

from app.runtime.document import Document
from app.schema import TaskType

SEPARATOR = "::"
PARTIAL_SEPARATOR = "||"

LEAF_HEADERS: dict[TaskType, tuple[str, ...]] = {
    TaskType.SEARCH: ("find", "value", "for:"),
    TaskType.CLASSIFY: ("classify", "items:"),
    TaskType.AGGREGATE: ("count", "categories:"),
    TaskType.PAIRWISE: ("label", "items:"),
    TaskType.SUMMARISE: ("summarise:",),
    TaskType.MULTI_HOP: ("extract", "facts:"),
}

# Tasks whose leaf prompt carries the query between header and payload.
QUERY_TASKS = frozenset({TaskType.SEARCH, TaskType.MULTI_HOP})

DETECT_HEADER = ("select", "task", "from:") + tuple(t.value for t in TaskType) + ("length:",)
COMPOSE_HEADER = ("combine",)
SYNTH_HEADER = ("answer",)

DETECTION_PREVIEW = 500


def leaf_overhead(task: TaskType, query: Optional[Document] = None) -> int:
    """Tokens a leaf prompt adds on top of its chunk."""
    extra = len(query) + 1 if task in QUERY_TASKS and query is not None else 0
    return len(LEAF_HEADERS[task]) + extra


def leaf_prompt(chunk: Document, task: TaskType, query: Optional[Document] = None) -> Document:
    """header ‖ [query ‖ "::"] ‖ chunk"""
    tokens = LEAF_HEADERS[task]
    if task in QUERY_TASKS and query is not None:
        tokens = tokens + query.tokens + (SEPARATOR,)
    return Document(tokens + chunk.tokens, None, chunk.sep)


def detection_prompt(preview: Document, length: int) -> Document:
    return Document(DETECT_HEADER + (str(length), SEPARATOR) + preview.tokens)


def detection_overhead() -> int:
    # the length field is a single token
    return len(DETECT_HEADER) + 2


def detection_budget(n: int, window: int) -> int:
    """Preview tokens sent to detection: at most 500, and the whole prompt fits the window."""
    return max(0, min(DETECTION_PREVIEW, n, window - detection_overhead()))


def compose_prompt(task: TaskType, partials: Sequence[str]) -> Document:
    """Neural ⊕: combine partial answers, separated by `||` tokens."""
    tokens: list[str] = [*COMPOSE_HEADER, f"{task.value}:"]
    for i, text in enumerate(partials):
        if i:
            tokens.append(PARTIAL_SEPARATOR)
        tokens.extend(text.split())
    return Document(tuple(tokens))


def compose_overhead() -> int:
    return len(COMPOSE_HEADER) + 1


def synth_prompt(query: Document, evidence: Document) -> Document:
    return Document(SYNTH_HEADER + query.tokens + (SEPARATOR,) + evidence.tokens)


def split_query(tokens: Sequence[str], start: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Split tokens[start:] at the first separator into (query, payload)."""
    rest = tuple(tokens[start:])
    try:
        cut = rest.index(SEPARATOR)
    except ValueError:
        return (), rest
    return rest[:cut], rest[cut + 1 :]
