"""
λ-RLM pipeline - TypedDict State Definition
"""

from typing import Any, Optional

from typing_extensions import TypedDict

from app.oracle.base import Oracle
from app.oracle.profile import OracleProfile
from app.runtime.document import Document
from app.runtime.trace import TraceRecorder
from app.schema import CostEstimate, ExecTrace, Plan, RunConfig, TaskInstance, TaskType


class RunState(TypedDict, total=False):
    """
    Shared state passed between the pipeline nodes.

    Inputs are set by the caller; every node adds its own keys and never
    rewrites earlier ones.
    """

    # Inputs
    config: RunConfig
    instance: TaskInstance
    profile: OracleProfile
    oracle: Oracle

    # Prompt and query as token documents
    doc: Document
    query: Document

    # Shared ledger of every oracle call, detection included
    recorder: TraceRecorder

    # Detection and planning
    task: TaskType
    plan: Plan
    estimate: CostEstimate
    predicted_accuracy: float

    # Execution and scoring
    answer: Any
    trace: ExecTrace
    score: Optional[float]
