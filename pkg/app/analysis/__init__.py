"""
Analysis: cost and accuracy models, optimal-k sweep and Monte-Carlo experiments
"""

from app.analysis.bounds import (
    KSketch,
    SweepResult,
    accuracy_lower_bound,
    cost_closed_form,
    cost_recurrence,
    depth_path_bound,
    direct_accuracy,
    power_law_bound,
    rlm_baseline_stub,
    scaling_exponent,
    sweep_optimal_k,
    interior_k_sketch,
)
from app.analysis.simulation import run_ablations, simulate_scaling, wilson_interval

__all__ = [
    "KSketch",
    "SweepResult",
    "accuracy_lower_bound",
    "cost_closed_form",
    "cost_recurrence",
    "depth_path_bound",
    "direct_accuracy",
    "power_law_bound",
    "rlm_baseline_stub",
    "run_ablations",
    "scaling_exponent",
    "simulate_scaling",
    "sweep_optimal_k",
    "interior_k_sketch",
    "wilson_interval",
]
