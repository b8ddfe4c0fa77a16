"""
Combinator runtime: documents, combinators, prompts and executors
"""

from app.runtime.combinators import (
    concat_op,
    cross_op,
    filter_op,
    keywords,
    map_op,
    peek,
    reduce_op,
    split,
    split_delta,
)
from app.runtime.document import Document
from app.runtime.prompts import leaf_prompt
from app.runtime.trace import TraceRecorder

__all__ = [
    "Document",
    "TraceRecorder",
    "concat_op",
    "cross_op",
    "filter_op",
    "keywords",
    "leaf_prompt",
    "map_op",
    "peek",
    "reduce_op",
    "split",
    "split_delta",
]
