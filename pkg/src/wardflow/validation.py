"""Direct prose-rule checks for allocations.

Deliberately independent of the encoder's clauses and the solver's search:
each rule is re-stated here in its plainest form so the two routes can be
checked against each other.
"""

from __future__ import annotations

from collections import Counter

from .knowledge import category_leq
from .problem import DailyAllocationProblem


def placement_violations(
    problem: DailyAllocationProblem, assignment: dict[str, str]
) -> list[str]:
    """All rule violations of a patient->room map (empty list = sound)."""
    violations: list[str] = []
    rooms = {r.room_id: r for r in problem.rooms}
    patients = {p.patient_id: p for p in problem.patients}

    for pid in assignment:
        if pid not in patients:
            violations.append(f"assignment covers unknown patient {pid!r}")
        if assignment[pid] not in rooms:
            violations.append(f"patient {pid!r} placed in unknown room {assignment[pid]!r}")
    for pid in patients:
        if pid not in assignment:
            violations.append(f"patient {pid!r} has no room")

    occupants: dict[str, list[str]] = {r: [] for r in rooms}
    for pid, rid in assignment.items():
        if pid in patients and rid in occupants:
            occupants[rid].append(pid)

    for rid, room in rooms.items():
        present = occupants[rid]
        if len(present) > room.capacity:
            violations.append(
                f"room {rid!r} holds {len(present)} patients, capacity {room.capacity}"
            )
        genders = {patients[pid].gender for pid in present}
        if len(genders) > 1:
            violations.append(f"room {rid!r} mixes genders {sorted(genders)}")
        for pid in present:
            if patients[pid].contagious and len(present) > 1:
                violations.append(f"contagious patient {pid!r} shares room {rid!r}")
            if not category_leq(rooms[rid].category, patients[pid].need_category):
                violations.append(
                    f"patient {pid!r} needs {patients[pid].need_category.name}, "
                    f"room {rid!r} is {rooms[rid].category.name}"
                )
    return violations


def allocation_violations(problem: DailyAllocationProblem, allocation) -> list[str]:
    """Check a feasible DailyAllocation against every stated invariant except
    move minimality (which needs an exhaustive oracle)."""
    violations = placement_violations(problem, allocation.assignment)

    expected_moves = {
        pid
        for pid, prev_room in problem.previous_assignment.items()
        if allocation.assignment.get(pid) != prev_room
    }
    if set(allocation.moves) != expected_moves:
        violations.append(
            f"moves set {sorted(allocation.moves)} != expected {sorted(expected_moves)}"
        )

    patients = {p.patient_id: p for p in problem.patients}
    occupied = Counter(allocation.assignment.values())
    for rid in occupied:
        if rid not in allocation.room_gender:
            violations.append(f"occupied room {rid!r} missing from room_gender")
    for rid, gender in allocation.room_gender.items():
        occupant_genders = {
            patients[pid].gender
            for pid, room in allocation.assignment.items()
            if room == rid and pid in patients
        }
        if occupant_genders and occupant_genders != {gender}:
            violations.append(
                f"room {rid!r} labeled {gender!r} but holds {sorted(occupant_genders)}"
            )
    return violations
