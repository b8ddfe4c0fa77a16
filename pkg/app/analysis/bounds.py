"""
Closed-form cost and accuracy models: recurrence, bounds, optimal-k sweep
"""

from __future__ import annotations

import logging
import math
from typing import NamedTuple, Optional

from app.oracle.profile import (
    OracleProfile,
    accuracy_at,
    composition_accuracy,
    composition_cost,
    cost_of,
)
from app.runtime.combinators import leaf_sizes
from app.runtime.executor import depth_for
from app.schema import BaselineRow

logger = logging.getLogger(__name__)


def cost_recurrence(
    n: int,
    k: int,
    tau: int,
    profile: OracleProfile,
    *,
    overhead: int = 0,
    deterministic: bool = True,
) -> float:
    """
    T(n) = k·T(n/k) + C⊕(k), T(τ) = C(τ), unrolled on the chunk sizes split
    actually produces. Empty leaves cost nothing. The sum is correctly
    rounded, so it matches a measured trace exactly.
    """
    if k < 2 or not 1 <= tau:
        raise ValueError("cost_recurrence needs k ≥ 2 and τ ≥ 1")
    d = depth_for(n, k, tau)
    terms: list[float] = []
    if not deterministic:
        nodes = (k**d - 1) // (k - 1)
        terms.extend([composition_cost(profile, k, False)] * nodes)
    for m, mult in leaf_sizes(n, k, d).items():
        if m > 0:
            terms.extend([cost_of(profile, m + overhead)] * mult)
    return math.fsum(terms)


def cost_closed_form(
    n: int,
    k: int,
    tau: int,
    profile: OracleProfile,
    *,
    overhead: int = 0,
    deterministic: bool = True,
) -> float:
    """(nk/τ)·C(τ) + C⊕(k)·(nk − τ)/(τ(k − 1)), exactly as written."""
    if k < 2:
        raise ValueError("cost_closed_form needs k ≥ 2")
    leaves = n * k / tau * cost_of(profile, tau + overhead)
    nodes = (n * k - tau) / (tau * (k - 1))
    return leaves + composition_cost(profile, k, deterministic) * nodes


def accuracy_lower_bound(
    n: int,
    k: int,
    tau: int,
    d: int,
    profile: OracleProfile,
    *,
    deterministic: bool = True,
    overhead: int = 0,
) -> float:
    """A(τ)^(nk/τ) · A⊕^d; A(τ) when the input fits (d = 0)."""
    a_tau = accuracy_at(profile, tau + overhead)
    if d == 0:
        return a_tau
    a_plus = composition_accuracy(profile, deterministic)
    return a_tau ** (n * k / tau) * a_plus**d


def direct_accuracy(n: int, profile: OracleProfile, *, overhead: int = 0) -> float:
    """A0 · ρ^(n/K), extrapolated past the window."""
    return accuracy_at(profile, n + overhead)


def power_law_bound(
    n: int,
    k: int,
    tau: int,
    d: int,
    profile: OracleProfile,
    *,
    deterministic: bool = True,
    overhead: int = 0,
) -> float:
    """(n/τ)^(log_k A(τ)) · A⊕^d"""
    a_tau = accuracy_at(profile, tau + overhead)
    a_plus = composition_accuracy(profile, deterministic)
    return (n / tau) ** math.log(a_tau, k) * a_plus**d


def depth_path_bound(
    n: int,
    k: int,
    tau: int,
    d: int,
    profile: OracleProfile,
    *,
    deterministic: bool = True,
    overhead: int = 0,
) -> float:
    """A(τ)^(log_k(n/τ)) · A⊕^d, the same quantity before re-expression."""
    a_tau = accuracy_at(profile, tau + overhead)
    a_plus = composition_accuracy(profile, deterministic)
    return a_tau ** math.log(n / tau, k) * a_plus**d


def scaling_exponent(
    k: int, tau: int, profile: OracleProfile, *, deterministic: bool = True
) -> float:
    """c = −log_k(A(τ)·A⊕); accuracy decays like n^(−c)."""
    a = accuracy_at(profile, tau) * composition_accuracy(profile, deterministic)
    return -math.log(a, k)


class KSketch(NamedTuple):
    alpha: float
    beta: float
    gamma: float
    interior: Optional[int]

    def expression(self, k: int) -> float:
        """(k²(α+β) − k(α+γ)) / (k − 1)"""
        return (k * k * (self.alpha + self.beta) - k * (self.alpha + self.gamma)) / (k - 1)


def interior_k_sketch(n: int, tau: int, profile: OracleProfile) -> KSketch:
    """α = n·C(τ)/τ, β = c⊕·n/τ, γ = c⊕, and ⌈1 + √(1 − (α+γ)/(α+β))⌉."""
    alpha = n * cost_of(profile, tau) / tau
    beta = profile.c_oplus * n / tau
    gamma = profile.c_oplus
    ratio = (alpha + gamma) / (alpha + beta) if alpha + beta > 0 else math.inf
    interior = math.ceil(1 + math.sqrt(1 - ratio)) if ratio <= 1 else None
    return KSketch(alpha, beta, gamma, interior)


class SweepResult(NamedTuple):
    argmin: int
    table: list[tuple[int, float]]
    sketch: KSketch
    sketch_table: list[tuple[int, float]]


def sweep_optimal_k(
    n: int, tau: int, profile: OracleProfile, k_max: int = 16, *, overhead: int = 0
) -> SweepResult:
    """
    Evaluate the closed-form bound with C⊕(k) = c⊕·k for every k in
    [2, k_max]; ties go to the smaller k.
    """
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    table = [
        (k, cost_closed_form(n, k, tau, profile, overhead=overhead, deterministic=False))
        for k in range(2, k_max + 1)
    ]
    argmin = min(table, key=lambda row: (row[1], row[0]))[0]
    sketch = interior_k_sketch(n, tau, profile)
    sketch_table = [(k, sketch.expression(k)) for k in range(2, k_max + 1)]
    logger.debug(f"sweep: argmin k={argmin} over [2, {k_max}], sketch interior={sketch.interior}")
    return SweepResult(argmin, table, sketch, sketch_table)


def rlm_baseline_stub(n: int, turns: int, profile: OracleProfile) -> BaselineRow:
    """
    Non-executing cost model of the open-ended REPL loop: one root call per
    turn over a window-limited history. A model, not a measurement.
    """
    if turns < 1:
        raise ValueError("turns must be at least 1")
    per_turn = cost_of(profile, min(n, profile.K))
    return BaselineRow(n=n, turns=turns, calls=turns, cost=turns * per_turn)
