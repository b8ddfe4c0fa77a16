"""
Thread-safe recorder behind ExecTrace
"""

from __future__ import annotations

import logging
import threading
from typing import Any, Optional

from app.schema import ExecTrace, Plan, TraceCall, TraceEvent

logger = logging.getLogger(__name__)


class TraceRecorder:
    """
    Ordered, append-only log of oracle calls and symbolic events.

    Call indices are reserved before dispatch, so records appended from
    worker threads are re-ordered by index and the finished trace does not
    depend on completion order.
    """

    def __init__(self, backend: str = "symbolic"):
        self.backend = backend
        self._lock = threading.Lock()
        self._next_index = 0
        self._calls: dict[int, TraceCall] = {}
        self._events: list[TraceEvent] = []
        self._flags: list[str] = []
        self.pruned_chunks = 0
        self.empty_leaves = 0
        self.parse_errors = 0

    def reserve_index(self, count: int = 1) -> int:
        """Reserve `count` consecutive call indices; returns the first."""
        with self._lock:
            first = self._next_index
            self._next_index += count
            return first

    def add_call(self, call: TraceCall) -> None:
        with self._lock:
            self._calls[call.index] = call
        logger.debug(
            f"call #{call.index} {call.kind} depth={call.depth} "
            f"in={call.input_tokens} out={call.output_tokens} cost={call.cost:.6f}"
        )

    def event(self, layer: str, op: str, detail: str = "") -> None:
        with self._lock:
            self._events.append(TraceEvent(index=len(self._events), layer=layer, op=op, detail=detail))

    def flag(self, name: str) -> None:
        with self._lock:
            if name not in self._flags:
                self._flags.append(name)

    def count(self, field: str, amount: int = 1) -> None:
        with self._lock:
            setattr(self, field, getattr(self, field) + amount)

    @property
    def flags(self) -> list[str]:
        with self._lock:
            return list(self._flags)

    @property
    def calls(self) -> list[TraceCall]:
        with self._lock:
            return [self._calls[i] for i in sorted(self._calls)]

    def build(self, plan: Optional[Plan] = None, answer: Any = None) -> ExecTrace:
        with self._lock:
            calls = [self._calls[i] for i in sorted(self._calls)]
            return ExecTrace(
                plan=plan,
                calls=calls,
                pruned_chunks=self.pruned_chunks,
                empty_leaves=self.empty_leaves,
                parse_errors=self.parse_errors,
                flags=list(self._flags),
                events=list(self._events),
                answer=answer,
            )
