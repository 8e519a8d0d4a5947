"""Round-based simulation: one SoS agent negotiating with N system agents."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import EmptyAggregate, InfeasibleBudget, ScenarioError, ZeroWeightSum
from .fam import FamTable, load_rules
from .fuzzy_core import GapKind, classify_gap, classify_weight
from .negotiation import (
    DEADLINE_RANGE,
    FUNDING_RANGE,
    PERF_RANGE,
    CapabilityState,
    compute_gaps,
    negotiate_round,
)

ACCEPTED = "Accepted"
ROUND_LIMIT = "RoundLimit"

# floor() guard so e.g. 2.4 / 0.3 counts as 8 performance points, not 7
_FLOOR_EPS = 1e-9


@dataclass(frozen=True)
class SystemAgentParams:
    system_id: str
    unit_cost: float
    slip_factor: int
    greed: float


@dataclass(frozen=True)
class CapabilitySpec:
    capability_id: str
    weight: float
    requested_performance: int
    requested_deadline: int
    funding_provided: float


@dataclass(frozen=True)
class Acceptance:
    max_weighted_mean_perf_gap: float = 1.0
    max_deadline_gap: int = 10


@dataclass(frozen=True)
class Scenario:
    total_budget: float
    capabilities: tuple[CapabilitySpec, ...]
    systems: tuple[SystemAgentParams, ...]
    acceptance: Acceptance = field(default_factory=Acceptance)
    max_rounds: int = 20
    rule_file: str = "default"
    rng_seed: int = 0

    def initial_states(self) -> list[CapabilityState]:
        # offered fields are placeholders until the first system response
        return [
            CapabilityState(
                capability_id=c.capability_id,
                weight=c.weight,
                requested_performance=c.requested_performance,
                offered_performance=c.requested_performance,
                requested_deadline=c.requested_deadline,
                offered_deadline=c.requested_deadline,
                funding_provided=c.funding_provided,
                funding_requested_by_system=max(c.funding_provided, FUNDING_RANGE[0]),
            )
            for c in self.capabilities
        ]


def _clamp(x, lo, hi):
    return min(max(x, lo), hi)


def system_respond(params: SystemAgentParams, request: CapabilityState) -> CapabilityState:
    """Linear cost/slip/greed stand-in for a system agent's black-box answer."""
    affordable = math.floor(request.funding_provided / params.unit_cost + _FLOOR_EPS)
    offered = _clamp(min(request.requested_performance, affordable), *PERF_RANGE)
    ask = _clamp(request.requested_performance * params.unit_cost * params.greed, *FUNDING_RANGE)
    shortfall = max(0, request.requested_performance - offered)
    deadline = _clamp(request.requested_deadline + params.slip_factor * shortfall, *DEADLINE_RANGE)
    return replace(
        request,
        offered_performance=int(offered),
        offered_deadline=int(deadline),
        funding_requested_by_system=float(ask),
    )


def weighted_mean_perf_gap(states) -> float:
    total = sum(s.weight for s in states)
    if total <= 0:
        raise ZeroWeightSum("all capability weights are zero")
    return sum(s.weight * compute_gaps(s).performance_gap for s in states) / total


def accept(states, acceptance: Acceptance) -> bool:
    """Threshold stand-in for the architecture-quality assessor."""
    if weighted_mean_perf_gap(states) > acceptance.max_weighted_mean_perf_gap:
        return False
    return all(compute_gaps(s).deadline_gap <= acceptance.max_deadline_gap for s in states)


# -- traces ---------------------------------------------------------------------

TRACE_COLUMNS = (
    "round",
    "system_id",
    "weight",
    "requested_perf",
    "offered_perf",
    "perf_gap",
    "perf_term",
    "funding_provided",
    "funding_requested",
    "funding_gap",
    "funding_term",
    "requested_deadline",
    "offered_deadline",
    "deadline_gap",
    "deadline_term",
    "weight_term",
    "raw_funding_adj",
    "raw_deadline_adj",
    "rec_funding_adj",
    "rec_deadline_adj",
    "fired_rules",
)
_REAL_COLUMNS = {
    "weight",
    "perf_gap",
    "funding_provided",
    "funding_requested",
    "funding_gap",
    "deadline_gap",
    "raw_funding_adj",
    "raw_deadline_adj",
    "rec_funding_adj",
}


@dataclass(frozen=True)
class TraceRecord:
    system_id: str
    state: CapabilityState
    raw_funding_adj: float = 0.0
    raw_deadline_adj: float = 0.0
    rec_funding_adj: float = 0.0
    rec_deadline_adj: int = 0
    fired_rules: int = 0

    def row(self, round_no: int) -> dict:
        s = self.state
        g = compute_gaps(s)
        return {
            "round": round_no,
            "system_id": self.system_id,
            "weight": s.weight,
            "requested_perf": s.requested_performance,
            "offered_perf": s.offered_performance,
            "perf_gap": g.performance_gap,
            "perf_term": classify_gap(GapKind.PERFORMANCE, g.performance_gap).label,
            "funding_provided": s.funding_provided,
            "funding_requested": s.funding_requested_by_system,
            "funding_gap": g.funding_gap,
            "funding_term": classify_gap(GapKind.FUNDING, g.funding_gap).label,
            "requested_deadline": s.requested_deadline,
            "offered_deadline": s.offered_deadline,
            "deadline_gap": g.deadline_gap,
            "deadline_term": classify_gap(GapKind.DEADLINE, g.deadline_gap).label,
            "weight_term": classify_weight(s.weight).label,
            "raw_funding_adj": self.raw_funding_adj,
            "raw_deadline_adj": self.raw_deadline_adj,
            "rec_funding_adj": self.rec_funding_adj,
            "rec_deadline_adj": self.rec_deadline_adj,
            "fired_rules": self.fired_rules,
        }


@dataclass(frozen=True)
class RoundTrace:
    round: int
    records: tuple[TraceRecord, ...]


@dataclass(frozen=True)
class Summary:
    status: str
    rounds: int
    final_weighted_mean_perf_gap: float
    budget_utilization: float

    def to_dict(self):
        return asdict(self)


def _fmt(col, value):
    if col in _REAL_COLUMNS:
        text = f"{value:.6f}"
        return "0.000000" if text == "-0.000000" else text
    return str(value)


def format_trace(traces) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for rt in traces:
        for rec in rt.records:
            row = rec.row(rt.round)
            w.writerow([_fmt(c, row[c]) for c in TRACE_COLUMNS])
    return buf.getvalue()


def atomic_write_text(path, text: str):
    """Write via a temp file in the target directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trace(traces, destination):
    atomic_write_text(destination, format_trace(traces))


# -- run ---------------------------------------------------------------------------


def run(scenario: Scenario, table: FamTable | None = None, base_dir=None):
    """Negotiate until acceptance or ``max_rounds``; returns (traces, summary, final states)."""
    if table is None:
        rule_file = scenario.rule_file
        if rule_file != "default" and base_dir is not None:
            rule_file = Path(base_dir) / rule_file
        table = load_rules(rule_file)
    params = scenario.systems
    requests = scenario.initial_states()
    traces = []
    status = ROUND_LIMIT
    states = requests
    for round_no in range(1, scenario.max_rounds + 1):
        states = [system_respond(p, r) for p, r in zip(params, requests)]
        try:
            done = accept(states, scenario.acceptance)
            if done:
                records = [TraceRecord(p.system_id, s) for p, s in zip(params, states)]
            else:
                plan, requests = negotiate_round(states, table, scenario.total_budget)
                records = [
                    TraceRecord(
                        p.system_id,
                        s,
                        a.raw_funding,
                        a.raw_deadline,
                        a.reconciled_funding,
                        a.reconciled_deadline,
                        len(a.inference.fired_rules),
                    )
                    for p, s, a in zip(params, states, plan)
                ]
        except (EmptyAggregate, InfeasibleBudget, ZeroWeightSum) as exc:
            raise type(exc)(f"round {round_no}: {exc}") from exc
        traces.append(RoundTrace(round_no, tuple(records)))
        if done:
            status = ACCEPTED
            break
    summary = Summary(
        status=status,
        rounds=len(traces),
        final_weighted_mean_perf_gap=weighted_mean_perf_gap(states),
        budget_utilization=sum(s.funding_provided for s in states) / scenario.total_budget,
    )
    return traces, summary, states


# -- scenario files ------------------------------------------------------------------

_TOP_FIELDS = ("total_budget", "capabilities", "systems", "acceptance", "max_rounds", "rule_file", "rng_seed")
_CAP_FIELDS = tuple(CapabilitySpec.__dataclass_fields__)
_SYS_FIELDS = tuple(SystemAgentParams.__dataclass_fields__)
_ACC_FIELDS = tuple(Acceptance.__dataclass_fields__)


def _fields(obj, allowed, path):
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ScenarioError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown field")
    missing = [k for k in allowed if k not in obj]
    if missing:
        raise ScenarioError(f"{path}.{missing[0]}" if path else missing[0], "missing field")


def _num(value, path, lo=None, hi=None, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected a number, got {value!r}")
    if integer and not (isinstance(value, int) or float(value).is_integer()):
        raise ScenarioError(path, f"expected an integer, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(path, "must be finite")
    if lo is not None and value < lo:
        raise ScenarioError(path, f"{value} below minimum {lo}")
    if hi is not None and value > hi:
        raise ScenarioError(path, f"{value} above maximum {hi}")
    return int(value) if integer else float(value)


def _ident(value, path):
    if not isinstance(value, str) or not value:
        raise ScenarioError(path, "expected a non-empty string")
    return value


def scenario_from_dict(data) -> Scenario:
    _fields(data, _TOP_FIELDS, "")
    budget = _num(data["total_budget"], "total_budget", lo=0)

    caps_raw = data["capabilities"]
    if not isinstance(caps_raw, list) or not caps_raw:
        raise ScenarioError("capabilities", "expected a non-empty list")
    caps = []
    for i, c in enumerate(caps_raw):
        p = f"capabilities[{i}]"
        _fields(c, _CAP_FIELDS, p)
        caps.append(
            CapabilitySpec(
                capability_id=_ident(c["capability_id"], f"{p}.capability_id"),
                weight=_num(c["weight"], f"{p}.weight", 0.0, 1.0),
                requested_performance=_num(
                    c["requested_performance"], f"{p}.requested_performance", *PERF_RANGE, integer=True
                ),
                requested_deadline=_num(
                    c["requested_deadline"], f"{p}.requested_deadline", *DEADLINE_RANGE, integer=True
                ),
                funding_provided=_num(c["funding_provided"], f"{p}.funding_provided", *FUNDING_RANGE),
            )
        )
    ids = [c.capability_id for c in caps]
    if len(set(ids)) != len(ids):
        raise ScenarioError("capabilities", "duplicate capability_id")

    sys_raw = data["systems"]
    if not isinstance(sys_raw, list):
        raise ScenarioError("systems", "expected a list")
    if len(sys_raw) != len(caps):
        raise ScenarioError(
            "systems", f"count mismatch: {len(sys_raw)} systems for {len(caps)} capabilities"
        )
    systems = []
    for i, s in enumerate(sys_raw):
        p = f"systems[{i}]"
        _fields(s, _SYS_FIELDS, p)
        unit_cost = _num(s["unit_cost"], f"{p}.unit_cost")
        if unit_cost <= 0:
            raise ScenarioError(f"{p}.unit_cost", "must be > 0")
        systems.append(
            SystemAgentParams(
                system_id=_ident(s["system_id"], f"{p}.system_id"),
                unit_cost=unit_cost,
                slip_factor=_num(s["slip_factor"], f"{p}.slip_factor", lo=0, integer=True),
                greed=_num(s["greed"], f"{p}.greed", lo=1.0),
            )
        )
    sids = [s.system_id for s in systems]
    if len(set(sids)) != len(sids):
        raise ScenarioError("systems", "duplicate system_id")

    acc = data["acceptance"]
    _fields(acc, _ACC_FIELDS, "acceptance")
    acceptance = Acceptance(
        max_weighted_mean_perf_gap=_num(
            acc["max_weighted_mean_perf_gap"], "acceptance.max_weighted_mean_perf_gap", lo=0
        ),
        max_deadline_gap=_num(acc["max_deadline_gap"], "acceptance.max_deadline_gap", lo=0, integer=True),
    )

    max_rounds = _num(data["max_rounds"], "max_rounds", lo=1, integer=True)
    rule_file = _ident(data["rule_file"], "rule_file")
    rng_seed = _num(data["rng_seed"], "rng_seed", integer=True)

    if sum(c.weight for c in caps) <= 0:
        raise ScenarioError("capabilities", "weights must not all be zero")
    if budget < len(caps) * FUNDING_RANGE[0]:
        raise ScenarioError("total_budget", f"cannot fund {len(caps)} capabilities at the minimum")
    spent = sum(c.funding_provided for c in caps)
    if spent > budget + 1e-9:
        raise ScenarioError("capabilities", f"initial funding {spent} exceeds total_budget {budget}")

    return Scenario(budget, tuple(caps), tuple(systems), acceptance, max_rounds, rule_file, rng_seed)


def load_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"invalid JSON: {exc}") from exc
    return scenario_from_dict(data)


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "total_budget": scenario.total_budget,
        "capabilities": [asdict(c) for c in scenario.capabilities],
        "systems": [asdict(s) for s in scenario.systems],
        "acceptance": asdict(scenario.acceptance),
        "max_rounds": scenario.max_rounds,
        "rule_file": scenario.rule_file,
        "rng_seed": scenario.rng_seed,
    }


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"


def default_scenario_text() -> str:
    return resources.files("fuzzysos").joinpath("data/default_scenario.json").read_text("utf-8")


def default_scenario() -> Scenario:
    return load_scenario(default_scenario_text())
