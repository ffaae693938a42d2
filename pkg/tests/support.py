"""Shared test helpers: independent oracles and random instance builders.

The schedule interpreter here deliberately avoids the simulator's Package
machinery, and the instance builders avoid the encoder: they exist to give
the tests a second route to the same answers.
"""

from __future__ import annotations

import heapq
import random

from wardflow.knowledge import BedBayCategory, Room, Treatment
from wardflow.problem import DailyAllocationProblem, PatientNeed

CATEGORIES = (
    BedBayCategory("HighMonitoring", 0),
    BedBayCategory("Intermediate", 1),
    BedBayCategory("Standard", 2),
)


def straight_line_schedule(treatment: Treatment, parallel: bool = False) -> list[str]:
    """Day-by-day category names a patient occupies, recomputed flat.

    Sequential mode: tasks run one at a time to completion, picking the
    smallest ready task_id at each completion point (Kahn order). Parallel
    mode: every ready task runs each day; the day's category is the
    strictest one executing.
    """
    durations = {t.task_id: t.duration_days for t in treatment.tasks}
    category = {t.task_id: t.required_category for t in treatment.tasks}
    if not parallel:
        indegree = {t.task_id: 0 for t in treatment.tasks}
        for _, after in treatment.dependencies:
            indegree[after] += 1
        ready = [t for t, d in sorted(indegree.items()) if d == 0]
        heapq.heapify(ready)
        schedule: list[str] = []
        while ready:
            task = heapq.heappop(ready)
            schedule.extend([category[task].name] * durations[task])
            for before, after in treatment.dependencies:
                if before == task:
                    indegree[after] -= 1
                    if indegree[after] == 0:
                        heapq.heappush(ready, after)
        return schedule

    remaining = dict(durations)
    done: set[str] = set()
    schedule = []
    while remaining:
        ready = [
            t
            for t in remaining
            if all(b in done for b, a in treatment.dependencies if a == t)
        ]
        schedule.append(min(category[t].level for t in ready))
        for t in ready:
            remaining[t] -= 1
            if remaining[t] == 0:
                del remaining[t]
                done.add(t)
    level_names = {c.level: c.name for c in CATEGORIES}
    return [level_names[lvl] for lvl in schedule]


def random_problem(rng: random.Random, max_patients: int = 6, max_rooms: int = 4) -> DailyAllocationProblem:
    """Random instance within oracle bounds, with a random previous map."""
    n = rng.randint(0, max_patients)
    m = rng.randint(1, max_rooms)
    rooms = tuple(
        Room(f"R{j + 1}", rng.randint(1, 3), rng.choice(CATEGORIES)) for j in range(m)
    )
    patients = tuple(
        PatientNeed(f"P{i + 1}", rng.choice("MF"), rng.random() < 0.25, rng.choice(CATEGORIES))
        for i in range(n)
    )
    previous = {
        p.patient_id: rng.choice(rooms).room_id
        for p in patients
        if rng.random() < 0.5
    }
    return DailyAllocationProblem(rng.randint(1, 365), patients, rooms, previous)


def successor_problem(rng: random.Random, problem: DailyAllocationProblem, assignment: dict[str, str]) -> DailyAllocationProblem:
    """A plausible next day: some patients stay (their placement becomes the
    previous assignment, possibly with a changed need), some leave, new ones
    arrive."""
    staying = [p for p in problem.patients if rng.random() < 0.7]
    patients = [
        PatientNeed(
            p.patient_id,
            p.gender,
            p.contagious,
            rng.choice(CATEGORIES) if rng.random() < 0.3 else p.need_category,
        )
        for p in staying
    ]
    for i in range(rng.randint(0, 2)):
        patients.append(
            PatientNeed(
                f"N{i + 1}", rng.choice("MF"), rng.random() < 0.25, rng.choice(CATEGORIES)
            )
        )
    previous = {p.patient_id: assignment[p.patient_id] for p in staying}
    return DailyAllocationProblem(
        problem.day + 1,
        tuple(sorted(patients, key=lambda p: p.patient_id)),
        problem.rooms,
        previous,
    )
