"""
Answer codecs and the deterministic composition operators
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Optional, Sequence

from app.errors import ParseFailure
from app.runtime.combinators import reduce_op
from app.schema import TaskType

logger = logging.getLogger(__name__)

NONE_TOKEN = "none"

Counts = dict[str, int]
Labels = list[tuple[int, str]]
Facts = list[tuple[str, str, str]]


# counts: "label=count" tokens


def parse_counts(text: str) -> Counts:
    counts: Counts = {}
    for token in text.split():
        label, eq, raw = token.partition("=")
        if not eq or not label or not raw.isdigit():
            logger.debug(f"dropping malformed count token {token!r}")
            continue
        counts[label] = counts.get(label, 0) + int(raw)
    return counts


def render_counts(counts: Counts) -> str:
    return " ".join(f"{label}={counts[label]}" for label in sorted(counts))


def merge_counts(a: Counts, b: Counts) -> Counts:
    """Per-key integer sum; a missing key counts as 0."""
    out = dict(a)
    for label, count in b.items():
        out[label] = out.get(label, 0) + count
    return out


# labels: one "item_id<TAB>label" record per line


def parse_label_line(line: str) -> tuple[int, str]:
    item, tab, label = line.partition("\t")
    if not tab or not item.strip().isdigit() or not label.strip() or "\t" in label:
        raise ParseFailure(f"malformed label record {line!r}", line)
    return int(item), label.strip()


def parse_labels(text: str) -> tuple[Labels, int]:
    """Parse label records, dropping malformed lines; returns (records, error count)."""
    records: Labels = []
    errors = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        try:
            records.append(parse_label_line(line))
        except ParseFailure as e:
            logger.debug(e.message)
            errors += 1
    return records, errors


def render_labels(records: Labels) -> str:
    return "\n".join(f"{item}\t{label}" for item, label in records)


# multi-hop facts: one "relation subject object" triple per line


def parse_facts(text: str) -> Facts:
    facts: Facts = []
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 3:
            facts.append((parts[0], parts[1], parts[2]))
    return facts


def render_facts(facts: Facts) -> str:
    return "\n".join(" ".join(f) for f in facts)


# search value


def parse_value(text: str) -> Optional[str]:
    tokens = text.split()
    if not tokens or tokens[0] == NONE_TOKEN:
        return None
    return tokens[0]


def render_value(value: Optional[str]) -> str:
    return NONE_TOKEN if value is None else value


def filter_best(a: Optional[str], b: Optional[str]) -> Optional[str]:
    """First non-empty partial answer in chunk order."""
    return a if a is not None else b


# per-task dispatch


def neutral_answer(task: TaskType) -> Any:
    """Answer of an empty leaf."""
    if task == TaskType.SEARCH:
        return None
    if task == TaskType.AGGREGATE:
        return {}
    return []


def parse_answer(task: TaskType, text: str) -> tuple[Any, int]:
    """Decode a leaf or composition answer; returns (value, parse errors)."""
    if task == TaskType.SEARCH:
        return parse_value(text), 0
    if task == TaskType.AGGREGATE:
        return parse_counts(text), 0
    if task in (TaskType.CLASSIFY, TaskType.PAIRWISE):
        return parse_labels(text)
    if task == TaskType.MULTI_HOP:
        return parse_facts(text), 0
    return text.split(), 0


def render_answer(task: TaskType, value: Any) -> str:
    if task == TaskType.SEARCH:
        return render_value(value)
    if task == TaskType.AGGREGATE:
        return render_counts(value)
    if task in (TaskType.CLASSIFY, TaskType.PAIRWISE):
        return render_labels(value)
    if task == TaskType.MULTI_HOP:
        return render_facts(value)
    return " ".join(value)


def _concat(a: list, b: list) -> list:
    return [*a, *b]


_BINARY_OPS: dict[TaskType, Callable[[Any, Any], Any]] = {
    TaskType.SEARCH: filter_best,
    TaskType.CLASSIFY: _concat,
    TaskType.AGGREGATE: merge_counts,
    TaskType.PAIRWISE: _concat,
    TaskType.SUMMARISE: _concat,
    TaskType.MULTI_HOP: _concat,
}


def combine(task: TaskType, partials: Sequence[Any]) -> Any:
    """Symbolic ⊕ for the task, folded left in chunk order."""
    if not partials:
        return neutral_answer(task)
    return reduce_op(_BINARY_OPS[task], list(partials))
