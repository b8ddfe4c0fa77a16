"""
Base-model abstraction M: a window-limited, priced answer oracle
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

from app.errors import ContextOverflow
from app.oracle.profile import OracleProfile, call_cost
from app.runtime.document import Document

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleCallRecord:
    index: int
    input_tokens: int
    output_tokens: int
    cost: float
    was_correct: Optional[bool] = None


@dataclass(frozen=True)
class OracleAnswer:
    text: str
    output_tokens: int
    was_correct: Optional[bool] = None


class Oracle(ABC):
    """
    Every backend shares the window check and the cost model; subclasses
    only produce answers.
    """

    name = "oracle"

    def __init__(self, profile: OracleProfile):
        self.profile = profile

    @abstractmethod
    def answer(self, prompt: Document, index: int) -> OracleAnswer:
        """Produce the answer text for one prompt."""

    def call(
        self, prompt: Document, index: int, *, enforce_window: bool = True
    ) -> tuple[Document, OracleCallRecord]:
        """
        Invoke the model on a prompt of at most K tokens.

        Args:
            prompt: the full prompt, header included
            index: pre-assigned call index, also the stochastic stream key
            enforce_window: only the direct baseline turns this off, to
                extrapolate accuracy past K

        Returns:
            (answer document, exact cost record)
        """
        n = len(prompt)
        if enforce_window and n > self.profile.K:
            raise ContextOverflow(
                f"prompt of {n} tokens exceeds window K={self.profile.K}",
                call_index=index,
                input_tokens=n,
                K=self.profile.K,
            )
        result = self.answer(prompt, index)
        record = OracleCallRecord(
            index=index,
            input_tokens=n,
            output_tokens=result.output_tokens,
            cost=call_cost(self.profile, n, result.output_tokens),
            was_correct=result.was_correct,
        )
        return Document.from_text(result.text, keep_raw=True), record
