"""SoS-agent side of the negotiation: gaps, fuzzy adjustments, budget reconciliation."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import EmptyAggregate, InfeasibleBudget
from .fam import FamTable, InferenceResult, infer

PERF_RANGE = (1, 10)
DEADLINE_RANGE = (1, 100)
FUNDING_RANGE = (1.0, 10.0)
BUDGET_TOL = 1e-9


@dataclass(frozen=True)
class CapabilityState:
    capability_id: str
    weight: float
    requested_performance: int
    offered_performance: int
    requested_deadline: int
    offered_deadline: int
    funding_provided: float
    funding_requested_by_system: float

    def check(self):
        """Raise ValueError if any field leaves its crisp range."""
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"{self.capability_id}: weight {self.weight} outside [0, 1]")
        for name in ("requested_performance", "offered_performance"):
            _check_range(self, name, PERF_RANGE)
        for name in ("requested_deadline", "offered_deadline"):
            _check_range(self, name, DEADLINE_RANGE)
        for name in ("funding_provided", "funding_requested_by_system"):
            _check_range(self, name, FUNDING_RANGE)
        return self


def _check_range(state, name, bounds):
    v = getattr(state, name)
    lo, hi = bounds
    if not lo <= v <= hi:
        raise ValueError(f"{state.capability_id}: {name}={v} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class GapVector:
    performance_gap: float
    funding_gap: float
    deadline_gap: float


def compute_gaps(state: CapabilityState) -> GapVector:
    """Shortfalls of the system's answer relative to the SoS position, floored at 0."""
    return GapVector(
        performance_gap=float(max(0, state.requested_performance - state.offered_performance)),
        funding_gap=max(0.0, state.funding_requested_by_system - state.funding_provided),
        deadline_gap=float(max(0, state.offered_deadline - state.requested_deadline)),
    )


@dataclass(frozen=True)
class Adjustment:
    capability_id: str
    raw_funding: float
    raw_deadline: float
    inference: InferenceResult | None = None
    reconciled_funding: float | None = None
    reconciled_deadline: int | None = None


def plan_adjustments(states, table: FamTable) -> list[Adjustment]:
    """Raw fuzzy funding/deadline adjustments, one per capability."""
    if not states:
        raise ValueError("no capabilities to plan for")
    plan = []
    for s in states:
        g = compute_gaps(s)
        try:
            res = infer(table, g.performance_gap, s.weight, g.funding_gap, g.deadline_gap)
        except EmptyAggregate as exc:
            raise EmptyAggregate(f"capability {s.capability_id}: {exc}") from exc
        plan.append(Adjustment(s.capability_id, res.funding_adjustment, res.deadline_adjustment, res))
    return plan


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def reconcile_budget(states, plan, total_budget: float) -> list[Adjustment]:
    """Fit raw adjustments into the fixed budget.

    Cuts are applied first (never below the funding floor) and their
    released money joins the unspent budget in a pool. Increases are paid
    in full if the pool covers them, otherwise all are scaled by the same
    factor. Deadline changes are rounded to whole cycles and clamped.
    """
    n = len(states)
    if len(plan) != n:
        raise ValueError("plan and states differ in length")
    lo_f, hi_f = FUNDING_RANGE
    if total_budget < n * lo_f:
        raise InfeasibleBudget(
            f"budget {total_budget} cannot fund {n} capabilities at the minimum {lo_f}"
        )
    spent = sum(s.funding_provided for s in states)
    if spent > total_budget + BUDGET_TOL:
        raise InfeasibleBudget(f"funding provided {spent} already exceeds budget {total_budget}")

    new_funding = [s.funding_provided for s in states]
    released = 0.0
    for i, (s, a) in enumerate(zip(states, plan)):
        if a.raw_funding < 0:
            new_funding[i] = max(lo_f, s.funding_provided + a.raw_funding)
            released += s.funding_provided - new_funding[i]

    pool = max(0.0, total_budget - spent) + released
    asked = sum(a.raw_funding for a in plan if a.raw_funding > 0)
    scale = 1.0 if asked <= pool else pool / asked
    for i, (s, a) in enumerate(zip(states, plan)):
        if a.raw_funding > 0:
            new_funding[i] = min(hi_f, s.funding_provided + a.raw_funding * scale)

    lo_d, hi_d = DEADLINE_RANGE
    out = []
    for s, a, f in zip(states, plan, new_funding):
        d = min(max(s.requested_deadline + round_half_away(a.raw_deadline), lo_d), hi_d)
        out.append(
            replace(
                a,
                reconciled_funding=f - s.funding_provided,
                reconciled_deadline=d - s.requested_deadline,
            )
        )
    return out


def next_request(state: CapabilityState, adjustment: Adjustment) -> CapabilityState:
    """The SoS concedes money and schedule; requested performance never changes."""
    if adjustment.reconciled_funding is None:
        raise ValueError(f"{state.capability_id}: adjustment not reconciled")
    lo_f, hi_f = FUNDING_RANGE
    lo_d, hi_d = DEADLINE_RANGE
    return replace(
        state,
        funding_provided=min(max(state.funding_provided + adjustment.reconciled_funding, lo_f), hi_f),
        requested_deadline=min(
            max(state.requested_deadline + adjustment.reconciled_deadline, lo_d), hi_d
        ),
    )


def negotiate_round(states, table: FamTable, total_budget: float):
    """One SoS decision step: returns (reconciled plan, next requests)."""
    plan = reconcile_budget(states, plan_adjustments(states, table), total_budget)
    return plan, [next_request(s, a) for s, a in zip(states, plan)]

