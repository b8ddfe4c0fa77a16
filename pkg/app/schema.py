"""
Pydantic models for plans, traces, instances and reports
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, List, Optional

from pydantic import BaseModel, Field, computed_field, model_validator

TRACE_SCHEMA_VERSION = 1
INSTANCE_SCHEMA_VERSION = 1


class TaskType(str, Enum):
    SEARCH = "search"
    CLASSIFY = "classify"
    AGGREGATE = "aggregate"
    PAIRWISE = "pairwise"
    SUMMARISE = "summarise"
    MULTI_HOP = "multi_hop"


class CompositionOp(str, Enum):
    FILTER_BEST = "FilterBest"
    CONCAT = "Concat"
    MERGE_COUNTS = "MergeCounts"
    CROSS_FILTER = "CrossFilter"
    NEURAL_CONCAT = "NeuralConcat"
    NEURAL_SYNTH = "NeuralSynth"

    @property
    def deterministic(self) -> bool:
        return self not in (CompositionOp.NEURAL_CONCAT, CompositionOp.NEURAL_SYNTH)


class Stage(str, Enum):
    SPLIT = "Split"
    SPLIT_DELTA = "SplitDelta"
    FILTER = "Filter"
    MAP_ORACLE = "MapOracle"
    MAP_PEEK = "MapPeek"
    PARSE = "Parse"
    CROSS = "Cross"
    CONCAT = "Concat"
    MERGE = "Merge"
    BEST = "Best"
    SYNTH = "Synth"


class Strategy(str, Enum):
    APPENDIX_SQRT = "appendix_sqrt"
    THEOREM_K2 = "theorem_k2"
    FIXED = "fixed"


class Plan(BaseModel):
    """Execution plan, fully determined before the first oracle call"""

    task: TaskType = Field(..., description="Detected or requested task type")
    compose: CompositionOp = Field(..., description="Composition operator ⊕")
    pipeline: List[Stage] = Field(..., description="Ordered stage list π")
    n: int = Field(..., ge=0, description="Prompt length the plan was built for")
    k_star: int = Field(..., ge=1, description="Branching factor")
    tau_star: int = Field(..., ge=1, description="Leaf threshold in tokens")
    depth: int = Field(..., ge=0, description="Recursion depth, ⌈log_k(n/τ)⌉")
    depth_appendix: int = Field(0, ge=0, description="Depth under the ⌈log_k(n/K)⌉ form")
    strategy: Strategy = Field(Strategy.APPENDIX_SQRT, description="Parameter strategy")
    alpha: float = Field(0.80, gt=0, le=1, description="Accuracy target")
    infeasible: bool = Field(False, description="Accuracy target unmet when planning stopped")
    flags: List[str] = Field(default_factory=list, description="Planner warnings")

    @property
    def prunes(self) -> bool:
        """Preview-then-filter pruning applies (Map(Peek) followed by Filter)."""
        return Stage.MAP_PEEK in self.pipeline and Stage.FILTER in self.pipeline

    @property
    def leaf_calls(self) -> int:
        return self.k_star**self.depth


class CostEstimate(BaseModel):
    """Pre-execution cost and call-count prediction"""

    total: float = Field(..., description="Predicted money spent")
    leaf_calls: int = Field(..., description="Oracle calls on nonempty leaves, at most (k*)^d")
    detection_calls: int = Field(1, description="Task detection calls")
    composition_calls: int = Field(0, description="Neural composition calls")
    leaf_cost: float = Field(..., description="Σ C(|leaf|) over nonempty leaves")
    composition_cost: float = Field(..., description="d · C⊕(k*)")
    detection_cost: float = Field(..., description="C(preview), preview capped at 500 tokens and the window")
    predicted_calls: int = Field(..., description="N̂ = leaf + detection + composition calls")


class TraceCall(BaseModel):
    """One oracle invocation as recorded by the executor"""

    index: int
    kind: str = Field(..., description="detect, leaf, compose, extract, synth or direct")
    depth: int
    input_tokens: int
    chunk_tokens: int = Field(0, description="Payload tokens excluding prompt overhead")
    output_tokens: int = 0
    cost: float
    backend: str
    was_correct: Optional[bool] = None


class TraceEvent(BaseModel):
    index: int
    layer: str = Field(..., description="symbolic, planning or neural")
    op: str
    detail: str = ""


class ExecTrace(BaseModel):
    """Per-run ledger of oracle calls, depths, token counts and cost"""

    schema_version: int = TRACE_SCHEMA_VERSION
    plan: Optional[Plan] = None
    calls: List[TraceCall] = Field(default_factory=list)
    pruned_chunks: int = 0
    empty_leaves: int = 0
    parse_errors: int = 0
    flags: List[str] = Field(default_factory=list)
    events: List[TraceEvent] = Field(default_factory=list)
    answer: Any = None

    @computed_field
    @property
    def oracle_calls(self) -> int:
        return len(self.calls)

    @computed_field
    @property
    def max_depth(self) -> int:
        return max((c.depth for c in self.calls), default=0)

    @computed_field
    @property
    def accumulated_cost(self) -> float:
        return math.fsum(c.cost for c in self.calls)

    @computed_field
    @property
    def neural_calls(self) -> int:
        return len(self.calls)

    @computed_field
    @property
    def symbolic_ops(self) -> int:
        return sum(1 for e in self.events if e.layer == "symbolic")

    def calls_of(self, *kinds: str) -> List[TraceCall]:
        return [c for c in self.calls if c.kind in kinds]


class TaskInstance(BaseModel):
    """Synthetic benchmark instance with exact ground truth"""

    schema_version: int = INSTANCE_SCHEMA_VERSION
    task: TaskType
    n: int = Field(..., ge=0, description="Total tokens of doc, or of the joined corpus")
    seed: int
    query: str
    doc: Optional[str] = None
    corpus: Optional[List[str]] = None
    truth: Any = None

    @model_validator(mode="after")
    def _one_payload(self) -> "TaskInstance":
        if (self.doc is None) == (self.corpus is None):
            raise ValueError("exactly one of doc or corpus must be set")
        return self


class RunConfig(BaseModel):
    """Settings of one `run` invocation"""

    task: Optional[str] = Field(None, description="Generator family when no instance is given")
    tokens: Optional[int] = Field(None, ge=1)
    seed: int = 0
    profile: str = "default"
    strategy: Strategy = Strategy.APPENDIX_SQRT
    k: Optional[int] = Field(None, ge=2, description="Branching factor for the fixed strategy")
    alpha: float = Field(0.80, gt=0, le=1)
    backend: str = Field("symbolic", pattern="^(symbolic|stochastic|remote)$")
    url: Optional[str] = None
    instance: Optional[str] = None
    trace_out: Optional[str] = None
    out: Optional[str] = None
    jobs: int = Field(1, ge=1)
    prune: bool = True
    neural_compose: bool = False
    strict: bool = Field(False, description="Raise on an off-menu task or an unreachable accuracy target")

    @model_validator(mode="after")
    def _check(self) -> "RunConfig":
        if self.instance is None and (self.task is None or self.tokens is None):
            raise ValueError("either an instance file or task and tokens are required")
        if self.strategy == Strategy.FIXED and self.k is None:
            raise ValueError("strategy=fixed requires k")
        return self


class ScalingRow(BaseModel):
    n: int
    method: str = Field(..., pattern="^(direct|lambda_rlm)$")
    trials: int = Field(..., ge=1)
    empirical_accuracy: float = Field(..., ge=0, le=1)
    predicted: float
    lower_bound: float
    exact_accuracy: float = Field(..., ge=0, le=1)
    ci_low: float
    ci_high: float
    mean_calls: float
    mean_cost: float


class AblationRow(BaseModel):
    variant: str
    trials: int
    accuracy: float
    exact_accuracy: float
    mean_calls: float
    mean_cost: float


class BaselineRow(BaseModel):
    n: int
    turns: int
    calls: int
    cost: float
    label: str = "model, not measurement"


class Check(BaseModel):
    name: str
    passed: bool
    measured: Any = None
    predicted: Any = None


class SuiteResult(BaseModel):
    suite: str
    checks: List[Check] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @computed_field
    @property
    def summary(self) -> str:
        ok = sum(c.passed for c in self.checks)
        return f"{ok}/{len(self.checks)}"
