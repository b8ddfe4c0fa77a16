"""
Seeded synthetic benchmark instances with exact ground truth, and scorers
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from typing import Any, Callable, Optional

from app.runtime.combinators import DOC_DELIMITER
from app.runtime.document import Document
from app.schema import TaskInstance, TaskType

logger = logging.getLogger(__name__)

# Inert padding: no digits and none of the detection phrases.
FILLER = (
    "lorem ipsum dolor sit amet consectetur adipiscing elit sed do eiusmod tempor "
    "incididunt ut labore et dolore magna aliqua enim ad minim veniam quis nostrud "
    "exercitation ullamco laboris nisi aliquip ex ea commodo consequat duis aute irure "
    "in reprehenderit voluptate velit esse cillum fugiat nulla pariatur"
).split()

HEADERS = {
    TaskType.SEARCH: "Find the hidden value for the requested key .",
    TaskType.AGGREGATE: "Count the questions in each category .",
    TaskType.PAIRWISE: "List every pair of items that share a label .",
    TaskType.MULTI_HOP: "Answer the question by joining records across documents .",
    TaskType.CLASSIFY: "Classify every item by label .",
    TaskType.SUMMARISE: "Summarise the following text .",
}

CATEGORIES = ("desc", "num", "enty", "hum", "loc", "abbr", "date", "code", "unit", "term")
ITEM_LABELS = ("red", "blue", "green", "amber", "violet", "teal", "ochre", "slate")

QUESTION_WORDS = 3
DEFAULT_DOC_TOKENS = 300

METRICS: dict[TaskType, str] = {
    TaskType.SEARCH: "exact",
    TaskType.CLASSIFY: "f1",
    TaskType.AGGREGATE: "exact",
    TaskType.PAIRWISE: "f1",
    TaskType.SUMMARISE: "exact",
    TaskType.MULTI_HOP: "exact",
}


def _header(task: TaskType) -> list[str]:
    return HEADERS[task].split()


def _filler(rng: random.Random, count: int) -> list[str]:
    return [rng.choice(FILLER) for _ in range(count)]


def _layout(rng: random.Random, records: list[list[str]], body: int) -> list[str]:
    """Scatter record runs among filler so the result has exactly `body` tokens."""
    used = sum(len(r) for r in records)
    if used > body:
        raise ValueError(f"{used} record tokens do not fit in {body}")
    units: list[list[str]] = records + [[w] for w in _filler(rng, body - used)]
    rng.shuffle(units)
    return [t for unit in units for t in unit]


def _ids(rng: random.Random, count: int, prefix: str) -> list[str]:
    return [f"{prefix}-{i:04d}" for i in rng.sample(range(10_000), count)]


def gen_needle(n: int, seed: int, distractors: Optional[int] = None) -> TaskInstance:
    """One `key-XXXX=VALUE` needle, plus distractor needles under other keys."""
    if n < 100:
        raise ValueError("needle instances need n ≥ 100")
    rng = random.Random(seed)
    header = _header(TaskType.SEARCH)
    m = min(20, n // 1000) if distractors is None else distractors
    keys = _ids(rng, m + 1, "key")
    values = [str(rng.randrange(100_000, 1_000_000)) for _ in keys]
    records = [[f"{k}={v}"] for k, v in zip(keys, values)]
    tokens = header + _layout(rng, records, n - len(header))
    return TaskInstance(
        task=TaskType.SEARCH,
        n=n,
        seed=seed,
        query=f"What is the hidden value for {keys[0]} ?",
        doc=" ".join(tokens),
        truth=values[0],
    )


def gen_aggregate(
    n: int, categories: int = 6, seed: int = 0, questions: Optional[int] = None
) -> TaskInstance:
    """
    Labelled question lines (`… cat:LABEL`) among filler; truth is the exact
    per-category count map.
    """
    if not 2 <= categories <= len(CATEGORIES):
        raise ValueError(f"categories must lie in [2, {len(CATEGORIES)}]")
    rng = random.Random(seed)
    header = _header(TaskType.AGGREGATE)
    body = n - len(header)
    per_question = QUESTION_WORDS + 1
    q = questions if questions is not None else max(categories, n // 131)
    q = min(q, body // per_question)
    if q < 1:
        raise ValueError(f"n={n} leaves no room for questions")

    labels = CATEGORIES[:categories]
    weights = [rng.uniform(0.5, 2.0) for _ in labels]
    assigned = rng.choices(labels, weights=weights, k=q)
    records = [_filler(rng, QUESTION_WORDS) + [f"cat:{label}"] for label in assigned]
    tokens = header + _layout(rng, records, body)
    return TaskInstance(
        task=TaskType.AGGREGATE,
        n=n,
        seed=seed,
        query="Which category is least common ?",
        doc=" ".join(tokens),
        truth=dict(sorted(Counter(assigned).items())),
    )


def least_common(counts: dict[str, int]) -> Optional[str]:
    """Label with the smallest count; ties go to the alphabetically first."""
    if not counts:
        return None
    return min(sorted(counts), key=lambda label: counts[label])


def same_label_pairs(labels: dict[int, str]) -> list[list[int]]:
    items = sorted(labels)
    return [
        [i, j]
        for a, i in enumerate(items)
        for j in items[a + 1 :]
        if labels[i] == labels[j]
    ]


def _labelled_items(rng: random.Random, items: int, palette: int) -> dict[int, str]:
    labels = ITEM_LABELS[: max(1, min(palette, len(ITEM_LABELS)))]
    return {i: rng.choice(labels) for i in range(1, items + 1)}


def gen_pairwise(
    items: int, seed: int, n: Optional[int] = None, labels: int = 6
) -> TaskInstance:
    """`item-ID:LABEL` tokens; truth is every same-label pair (i < j)."""
    if items < 2:
        raise ValueError("pairwise instances need at least 2 items")
    rng = random.Random(seed)
    header = _header(TaskType.PAIRWISE)
    n = n if n is not None else len(header) + 5 * items
    assigned = _labelled_items(rng, items, labels)
    records = [[f"item-{i}:{label}"] for i, label in assigned.items()]
    tokens = header + _layout(rng, records, n - len(header))
    return TaskInstance(
        task=TaskType.PAIRWISE,
        n=n,
        seed=seed,
        query="Which pairs of items share a label ?",
        doc=" ".join(tokens),
        truth=same_label_pairs(assigned),
    )


def gen_classify(n: int, seed: int, labels: int = 6) -> TaskInstance:
    rng = random.Random(seed)
    header = _header(TaskType.CLASSIFY)
    items = max(1, (n - len(header)) // 10)
    assigned = _labelled_items(rng, items, labels)
    records = [[f"item-{i}:{label}"] for i, label in assigned.items()]
    tokens = header + _layout(rng, records, n - len(header))
    return TaskInstance(
        task=TaskType.CLASSIFY,
        n=n,
        seed=seed,
        query="Give the label of every item .",
        doc=" ".join(tokens),
        truth=[[i, label] for i, label in assigned.items()],
    )


def gen_summarise(n: int, seed: int) -> TaskInstance:
    """Extractive summary: the ordered `note:XXXX` tokens."""
    rng = random.Random(seed)
    header = _header(TaskType.SUMMARISE)
    notes = _ids(rng, max(1, min(n // 200, 1000)), "note")
    notes = [t.replace("note-", "note:") for t in notes]
    body = _layout(rng, [[t] for t in notes], n - len(header))
    return TaskInstance(
        task=TaskType.SUMMARISE,
        n=n,
        seed=seed,
        query="Summarise the notes in order .",
        doc=" ".join(header + body),
        truth=[t for t in body if t.startswith("note:")],
    )


def gen_multihop(
    docs: int, seed: int, doc_tokens: int = DEFAULT_DOC_TOKENS, relevant: bool = True
) -> TaskInstance:
    """
    A corpus where the answer joins two documents of one case: one holds the
    entity's employer, the other the employer's city.
    """
    if docs < 2:
        raise ValueError("multi-hop instances need at least 2 documents")
    if doc_tokens < 24:
        raise ValueError("documents need at least 24 tokens")
    rng = random.Random(seed)
    header = _header(TaskType.MULTI_HOP)
    cases = _ids(rng, docs, "case")
    ents = _ids(rng, docs, "ent")
    orgs = _ids(rng, docs, "org")
    cities = _ids(rng, docs, "city")

    target = cases[0]
    joined = rng.sample(range(docs), 2)
    facts: list[list[str]] = []
    for i in range(docs):
        if i == joined[0]:
            facts.append([target, "record", "employer", ents[0], orgs[0], "."])
        elif i == joined[1]:
            facts.append([target, "record", "city", orgs[0], cities[0], "."])
        else:
            # decoys of other cases, never joinable with the target entity
            rel = rng.choice(["employer", "city"])
            subj, obj = (ents[i], orgs[i]) if rel == "employer" else (orgs[i], cities[i])
            facts.append([cases[i], "record", rel, subj, obj, "."])

    corpus = []
    for run in facts:
        head = [DOC_DELIMITER] + header + run
        corpus.append(" ".join(head + _filler(rng, doc_tokens - len(head))))

    # an unrelated query names a case and an entity that appear nowhere
    case = target if relevant else f"case-{10_000 + seed % 10_000}"
    ent = ents[0] if relevant else f"ent-{10_000 + seed % 10_000}"
    return TaskInstance(
        task=TaskType.MULTI_HOP,
        n=docs * doc_tokens,
        seed=seed,
        query=f"{case} which city hosts the employer of {ent} ?",
        corpus=corpus,
        truth=cities[0] if relevant else None,
    )


GENERATORS: dict[str, Callable[[int, int], TaskInstance]] = {
    "needle": lambda n, seed: gen_needle(n, seed),
    "aggregate": lambda n, seed: gen_aggregate(n, seed=seed),
    "pairwise": lambda n, seed: gen_pairwise(max(2, n // 50), seed, n=n),
    "multihop": lambda n, seed: gen_multihop(max(2, n // DEFAULT_DOC_TOKENS), seed),
    "classify": gen_classify,
    "summarise": gen_summarise,
}


def generate(family: str, n: int, seed: int) -> TaskInstance:
    if family not in GENERATORS:
        raise ValueError(f"unknown task family {family!r}; choose from {sorted(GENERATORS)}")
    instance = GENERATORS[family](n, seed)
    logger.debug(f"generated {family} instance n={instance.n} seed={seed}")
    return instance


def instance_document(instance: TaskInstance) -> Document:
    """The prompt P: the document, or the corpus joined in order."""
    if instance.doc is not None:
        return Document.from_text(instance.doc)
    return Document.from_text(" ".join(instance.corpus or []))


def _freeze(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return tuple(_freeze(e) for e in x)
    if isinstance(x, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in x.items()))
    return x


def _as_set(x: Any) -> set:
    if x is None:
        return set()
    if isinstance(x, dict):
        return {(k, _freeze(v)) for k, v in x.items()}
    if isinstance(x, str):
        return {x}
    return {_freeze(e) for e in x}


def score(answer: Any, truth: Any, metric: str = "exact") -> float:
    """Exact-match indicator, or set-F1 over pairs, records or values."""
    if metric == "exact":
        return 1.0 if _freeze(answer) == _freeze(truth) else 0.0
    if metric != "f1":
        raise ValueError(f"unknown metric {metric!r}")
    predicted, actual = _as_set(answer), _as_set(truth)
    if not predicted and not actual:
        return 1.0
    hits = len(predicted & actual)
    if hits == 0:
        return 0.0
    precision, recall = hits / len(predicted), hits / len(actual)
    return 2 * precision * recall / (precision + recall)


def score_instance(instance: TaskInstance, answer: Any) -> float:
    return score(answer, instance.truth, METRICS[instance.task])
