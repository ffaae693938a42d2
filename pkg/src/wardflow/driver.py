"""Plan orchestration: simulate, then encode+solve day by day.

The previous day's assignment is carried forward between days; on an
infeasible (or budget-exceeded) day the day is marked, no allocation is
emitted, and the standing assignment is kept for the next day.

Persisted plan documents are canonical JSON without timing data, so a re-run
on identical inputs is byte-identical. Phase wall times live on the returned
AllocationPlan object only.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .encoder import encode
from .knowledge import load_knowledge
from .problem import problem_for_day
from .simulator import simulate
from .solver import (
    FEASIBLE,
    INFEASIBLE,
    DailyAllocation,
    SolverBudgetError,
    solve,
)
from .store import DataStore

BUDGET_EXCEEDED = "budget_exceeded"


class DisjointPlansError(Exception):
    """diff_plans refused: the two plans share no patients at all."""


@dataclass(frozen=True)
class PlanConfig:
    parallel_tasks: bool = False
    budget_secs: float | None = 60.0
    reset_carry_on_skip: bool = False  # drop the standing assignment after a skipped day
    plan_id: str | None = None  # defaults to the scenario id


@dataclass(frozen=True)
class PlanDay:
    day: int
    status: str  # feasible | infeasible | budget_exceeded
    allocation: DailyAllocation | None


@dataclass
class PhaseTimings:
    simulate_secs: float = 0.0
    encode_secs: float = 0.0
    solve_secs: float = 0.0


@dataclass
class AllocationPlan:
    plan_id: str
    scenario_id: str
    ward_id: str
    parallel_tasks: bool
    days: list[PlanDay] = field(default_factory=list)
    timings: PhaseTimings = field(default_factory=PhaseTimings)

    @property
    def total_days(self) -> int:
        return len(self.days)

    @property
    def infeasible_days(self) -> list[int]:
        return [d.day for d in self.days if d.status == INFEASIBLE]

    @property
    def budget_exceeded_days(self) -> list[int]:
        return [d.day for d in self.days if d.status == BUDGET_EXCEEDED]

    @property
    def total_moves(self) -> int:
        return sum(len(d.allocation.moves) for d in self.days if d.status == FEASIBLE)

    def to_payload(self) -> dict:
        days = []
        for d in self.days:
            entry: dict = {"day": d.day, "status": d.status}
            if d.status == FEASIBLE:
                alloc = d.allocation
                entry["allocations"] = [
                    {
                        "patient_id": pid,
                        "room_id": alloc.assignment[pid],
                        "gender": alloc.room_gender[alloc.assignment[pid]],
                        "moved": pid in alloc.moves,
                    }
                    for pid in sorted(alloc.assignment)
                ]
            days.append(entry)
        return {
            "plan_id": self.plan_id,
            "scenario_id": self.scenario_id,
            "ward_id": self.ward_id,
            "parallel_tasks": self.parallel_tasks,
            "days": days,
            "summary": {
                "total_days": self.total_days,
                "total_moves": self.total_moves,
                "infeasible_days": self.infeasible_days,
                "budget_exceeded_days": self.budget_exceeded_days,
            },
        }

    def to_document(self) -> str:
        """Canonical serialized form; byte-stable for identical inputs."""
        return json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":")) + "\n"


def run_plan(store: DataStore, scenario_id: str, config: PlanConfig = PlanConfig()) -> AllocationPlan:
    """Full pipeline for one scenario; the resulting plan is persisted."""
    scenario, _ = store.get_scenario(scenario_id)
    ward_doc, _ = store.get_ward(scenario.ward_ref)
    kb = load_knowledge(ward_doc, scenario.ward_ref)

    plan = AllocationPlan(
        plan_id=config.plan_id or scenario_id,
        scenario_id=scenario_id,
        ward_id=scenario.ward_ref,
        parallel_tasks=config.parallel_tasks,
    )
    t0 = time.perf_counter()
    timeline = simulate(scenario, kb, parallel=config.parallel_tasks)
    plan.timings.simulate_secs = time.perf_counter() - t0

    carried: dict[str, str] = {}
    for day in timeline.days():
        t1 = time.perf_counter()
        problem = problem_for_day(day, timeline.needs_on(day), kb.ward, carried)
        system = encode(problem)
        t2 = time.perf_counter()
        plan.timings.encode_secs += t2 - t1
        try:
            allocation = solve(system, config.budget_secs)
        except SolverBudgetError:
            plan.timings.solve_secs += time.perf_counter() - t2
            plan.days.append(PlanDay(day, BUDGET_EXCEEDED, None))
            if config.reset_carry_on_skip:
                carried = {}
            continue
        plan.timings.solve_secs += time.perf_counter() - t2
        if allocation.feasible:
            plan.days.append(PlanDay(day, FEASIBLE, allocation))
            carried = dict(allocation.assignment)
        else:
            plan.days.append(PlanDay(day, INFEASIBLE, None))
            if config.reset_carry_on_skip:
                carried = {}

    store.put_plan(plan.plan_id, scenario_id, plan.to_document())
    return plan


def build_day_problem(
    store: DataStore, scenario_id: str, day: int, config: PlanConfig = PlanConfig()
):
    """Reconstruct one day's allocation problem, solving the preceding days
    to recover the carried assignment (used by the encode/solve-day tools)."""
    scenario, _ = store.get_scenario(scenario_id)
    ward_doc, _ = store.get_ward(scenario.ward_ref)
    kb = load_knowledge(ward_doc, scenario.ward_ref)
    timeline = simulate(scenario, kb, parallel=config.parallel_tasks)
    if not 1 <= day <= timeline.last_day:
        raise ValueError(f"day {day} outside the timeline 1..{timeline.last_day}")
    carried: dict[str, str] = {}
    for d in range(1, day):
        problem = problem_for_day(d, timeline.needs_on(d), kb.ward, carried)
        allocation = solve(encode(problem), config.budget_secs)
        if allocation.feasible:
            carried = dict(allocation.assignment)
        elif config.reset_carry_on_skip:
            carried = {}
    return problem_for_day(day, timeline.needs_on(day), kb.ward, carried)


def load_plan_payload(store: DataStore, plan_id: str) -> dict:
    return json.loads(store.get_plan(plan_id))


def _day_placements(payload: dict) -> dict[int, dict[str, str]]:
    return {
        d["day"]: {a["patient_id"]: a["room_id"] for a in d.get("allocations", [])}
        for d in payload["days"]
    }


def diff_plans(payload_a: dict, payload_b: dict, require_overlap: bool = True) -> dict:
    """Structured per-day difference between two plan payloads.

    With require_overlap (the default), plans whose patient populations are
    completely disjoint are rejected; pass False to diff anyway.
    """
    placements_a = _day_placements(payload_a)
    placements_b = _day_placements(payload_b)
    patients_a = {p for day in placements_a.values() for p in day}
    patients_b = {p for day in placements_b.values() for p in day}
    if require_overlap and patients_a and patients_b and not (patients_a & patients_b):
        raise DisjointPlansError(
            "plans share no patients; pass require_overlap=False to diff anyway"
        )

    status_a = {d["day"]: d["status"] for d in payload_a["days"]}
    status_b = {d["day"]: d["status"] for d in payload_b["days"]}
    days = []
    for day in sorted(set(status_a) | set(status_b)):
        in_a = placements_a.get(day, {})
        in_b = placements_b.get(day, {})
        changed = [
            {"patient_id": p, "room_a": in_a[p], "room_b": in_b[p]}
            for p in sorted(set(in_a) & set(in_b))
            if in_a[p] != in_b[p]
        ]
        only_a = sorted(set(in_a) - set(in_b))
        only_b = sorted(set(in_b) - set(in_a))
        sa, sb = status_a.get(day), status_b.get(day)
        if changed or only_a or only_b or sa != sb:
            days.append(
                {
                    "day": day,
                    "status_a": sa,
                    "status_b": sb,
                    "changed": changed,
                    "only_a": only_a,
                    "only_b": only_b,
                }
            )
    return {
        "plan_a": payload_a["plan_id"],
        "plan_b": payload_b["plan_id"],
        "days": days,
        "move_delta": payload_b["summary"]["total_moves"] - payload_a["summary"]["total_moves"],
        "infeasible_delta": {
            "only_a": sorted(
                set(payload_a["summary"]["infeasible_days"])
                - set(payload_b["summary"]["infeasible_days"])
            ),
            "only_b": sorted(
                set(payload_b["summary"]["infeasible_days"])
                - set(payload_a["summary"]["infeasible_days"])
            ),
        },
    }


def diff_stored_plans(
    store: DataStore, plan_a: str, plan_b: str, require_overlap: bool = True
) -> dict:
    payload_a = load_plan_payload(store, plan_a)
    payload_b = load_plan_payload(store, plan_b)
    return diff_plans(payload_a, payload_b, require_overlap)
