"""Discrete-time patient-flow simulation.

Each simulated day: admit the day's arrivals, execute tasks inside every
ongoing package, emit one bed need per patient that executed something, and
retire packages whose tasks are all done. The simulation keeps running past
the arrival horizon until every package has drained.

Two execution policies exist. The default runs exactly one enabled task per
package per day (deterministic smallest-task_id tie-break); with
parallel_tasks=True all enabled tasks run concurrently and the day's bed need
is the strictest executing category.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .knowledge import BedBayCategory, KnowledgeBase, treatment_for
from .patients import PatientRecord, Scenario, arrivals_on


@dataclass(frozen=True)
class Package:
    """One patient's ongoing treatment: remaining tasks plus the task DAG."""

    patient: PatientRecord
    remaining: dict[str, int]  # task_id -> remaining duration in days
    completed: frozenset[str]
    task_categories: dict[str, BedBayCategory]
    dependencies: tuple[tuple[str, str], ...]

    @property
    def remaining_tasks(self) -> list[tuple[str, int, BedBayCategory]]:
        return [(t, d, self.task_categories[t]) for t, d in self.remaining.items()]

    @property
    def empty(self) -> bool:
        return not self.remaining


@dataclass(frozen=True)
class BedNeed:
    day: int
    patient_id: str
    category: BedBayCategory
    gender: str
    contagious: bool


@dataclass
class BedNeedTimeline:
    """Per-day bed needs, dense from day 1 through the last non-empty day."""

    needs_by_day: dict[int, tuple[BedNeed, ...]] = field(default_factory=dict)

    @property
    def last_day(self) -> int:
        return max(self.needs_by_day, default=0)

    def days(self) -> range:
        return range(1, self.last_day + 1)

    def needs_on(self, day: int) -> tuple[BedNeed, ...]:
        return self.needs_by_day.get(day, ())

    def patient_days(self, patient_id: str) -> list[int]:
        return [
            day
            for day, needs in sorted(self.needs_by_day.items())
            if any(n.patient_id == patient_id for n in needs)
        ]


def make_package(patient: PatientRecord, kb: KnowledgeBase) -> Package:
    """Fresh package with the full treatment ahead of it."""
    treatment = treatment_for(kb, patient.diagnosis)
    return Package(
        patient=patient,
        remaining={t.task_id: t.duration_days for t in treatment.tasks},
        completed=frozenset(),
        task_categories={t.task_id: t.required_category for t in treatment.tasks},
        dependencies=treatment.dependencies,
    )


def active_tasks(pkg: Package) -> list[str]:
    """Remaining tasks whose every dependency predecessor has completed."""
    blocked = {
        after
        for before, after in pkg.dependencies
        if before not in pkg.completed
    }
    return sorted(t for t in pkg.remaining if t not in blocked)


def _execute_day(pkg: Package, day: int, parallel: bool) -> tuple[Package, BedNeed | None]:
    active = active_tasks(pkg)
    if not active:
        return pkg, None
    executing = active if parallel else [active[0]]
    remaining = dict(pkg.remaining)
    completed = set(pkg.completed)
    for task in executing:
        remaining[task] -= 1
        if remaining[task] == 0:
            del remaining[task]
            completed.add(task)
    need = BedNeed(
        day=day,
        patient_id=pkg.patient.patient_id,
        category=min((pkg.task_categories[t] for t in executing), key=lambda c: c.level),
        gender=pkg.patient.gender,
        contagious=pkg.patient.contagious,
    )
    stepped = Package(
        patient=pkg.patient,
        remaining=remaining,
        completed=frozenset(completed),
        task_categories=pkg.task_categories,
        dependencies=pkg.dependencies,
    )
    return stepped, need


def step_day(
    packages: list[Package],
    day: int,
    scenario: Scenario,
    kb: KnowledgeBase,
    parallel: bool = False,
) -> tuple[list[Package], list[BedNeed]]:
    """Advance one day: admit arrivals, execute tasks, collect bed needs.

    Returns the surviving packages and the day's needs (patient_id order).
    Input packages are not mutated.
    """
    ongoing = list(packages)
    if 1 <= day <= scenario.horizon_days:
        ongoing.extend(make_package(p, kb) for p in arrivals_on(scenario, day))
    survivors: list[Package] = []
    needs: list[BedNeed] = []
    for pkg in ongoing:
        stepped, need = _execute_day(pkg, day, parallel)
        if need is not None:
            needs.append(need)
        if not stepped.empty:
            survivors.append(stepped)
    needs.sort(key=lambda n: n.patient_id)
    return survivors, needs


def simulate(scenario: Scenario, kb: KnowledgeBase, parallel: bool = False) -> BedNeedTimeline:
    """Run the whole scenario into a bed-need timeline (pure, deterministic)."""
    timeline = BedNeedTimeline()
    last_arrival = max((p.arrival_day for p in scenario.patients), default=0)
    packages: list[Package] = []
    day = 1
    while packages or day <= last_arrival:
        packages, needs = step_day(packages, day, scenario, kb, parallel)
        if needs:
            timeline.needs_by_day[day] = tuple(needs)
        day += 1
    return timeline


def timeline_to_csv(timeline: BedNeedTimeline) -> str:
    """One record per (day, patient, category, gender, contagious)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["day", "patient_id", "category", "gender", "contagious"])
    for day in timeline.days():
        for need in timeline.needs_on(day):
            writer.writerow(
                [
                    need.day,
                    need.patient_id,
                    need.category.name,
                    need.gender,
                    "true" if need.contagious else "false",
                ]
            )
    return out.getvalue()
