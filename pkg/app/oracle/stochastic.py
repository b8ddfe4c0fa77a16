"""
Seeded stochastic oracle with context-rot accuracy decay
"""

from __future__ import annotations

import logging

import numpy as np

from app.oracle.base import Oracle, OracleAnswer
from app.oracle.profile import accuracy_at
from app.oracle.symbolic import (
    KIND_COUNTS,
    KIND_DETECT,
    KIND_FACTS,
    KIND_LABELS,
    KIND_VALUE,
    respond,
)
from app.runtime.compose import (
    NONE_TOKEN,
    parse_counts,
    parse_facts,
    parse_labels,
    render_counts,
    render_facts,
    render_labels,
)
from app.runtime.document import Document
from app.schema import TaskType

logger = logging.getLogger(__name__)

GARBLED = "[garbled]"


def call_stream(seed: int, index: int, input_tokens: int) -> np.random.Generator:
    """Random stream of one call, a pure function of (seed, index, input length)."""
    return np.random.default_rng([seed, index, input_tokens])


def _alter_digit(value: str, rng: np.random.Generator) -> str:
    positions = [i for i, c in enumerate(value) if c.isdigit()]
    if not positions:
        return value + "x"
    i = positions[int(rng.integers(len(positions)))]
    digit = (int(value[i]) + int(rng.integers(1, 10))) % 10
    return value[:i] + str(digit) + value[i + 1 :]


def corrupt(text: str, kind: str, rng: np.random.Generator) -> str:
    """
    Minimal perturbation of a correct answer within its answer space;
    the result always differs from the input.
    """
    if kind == KIND_DETECT:
        menu = [t.value for t in TaskType if t.value != text]
        return menu[int(rng.integers(len(menu)))]

    if kind == KIND_VALUE:
        if text == NONE_TOKEN or not text:
            return str(int(rng.integers(100_000, 1_000_000)))
        return _alter_digit(text, rng)

    if kind == KIND_COUNTS:
        counts = parse_counts(text)
        delta = int(rng.integers(1, 4))
        if not counts:
            return render_counts({"misc": delta})
        labels = sorted(counts)
        label = labels[int(rng.integers(len(labels)))]
        if counts[label] >= delta and rng.random() < 0.5:
            counts[label] -= delta
        else:
            counts[label] += delta
        return render_counts(counts)

    if kind == KIND_LABELS:
        records, _ = parse_labels(text)
        if not records:
            return render_labels([(0, "bogus")])
        i = int(rng.integers(len(records)))
        item, label = records[i]
        others = sorted({lbl for _, lbl in records} - {label})
        flipped = others[int(rng.integers(len(others)))] if others else label + "x"
        records[i] = (item, flipped)
        return render_labels(records)

    if kind == KIND_FACTS:
        facts = parse_facts(text)
        if not facts:
            return render_facts([("employer", "ent-0000", "org-0000")])
        i = int(rng.integers(len(facts)))
        rel, subj, obj = facts[i]
        facts[i] = (rel, subj, _alter_digit(obj, rng))
        return render_facts(facts)

    tokens = text.split()
    if not tokens:
        return GARBLED
    tokens[int(rng.integers(len(tokens)))] = GARBLED
    return " ".join(tokens)


class StochasticOracle(Oracle):
    """
    Answers correctly with probability A(|prompt|), otherwise returns a
    corrupted answer of the same shape. Outcomes depend only on
    (seed, call index, input length), so concurrency cannot change them.
    """

    name = "stochastic"

    def answer(self, prompt: Document, index: int) -> OracleAnswer:
        text, kind = respond(prompt.tokens)
        rng = call_stream(self.profile.seed, index, len(prompt))
        correct = bool(rng.random() < accuracy_at(self.profile, len(prompt)))
        if not correct:
            text = corrupt(text, kind, rng)
        return OracleAnswer(text, self.profile.n_out_bar, correct)
