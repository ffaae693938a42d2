"""One day's allocation problem: today's patients, the ward, yesterday's map."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .knowledge import BedBayCategory, Room, Ward
from .simulator import BedNeed


@dataclass(frozen=True)
class PatientNeed:
    """A patient as the allocator sees them on one day."""

    patient_id: str
    gender: str
    contagious: bool
    need_category: BedBayCategory


@dataclass(frozen=True)
class DailyAllocationProblem:
    day: int
    patients: tuple[PatientNeed, ...]  # sorted by patient_id
    rooms: tuple[Room, ...]  # sorted by room_id
    previous_assignment: dict[str, str] = field(default_factory=dict)

    @property
    def returning_patients(self) -> list[str]:
        """Patients present today that also carry a previous placement."""
        return [p.patient_id for p in self.patients if p.patient_id in self.previous_assignment]


def problem_for_day(
    day: int,
    needs: Iterable[BedNeed],
    ward: Ward,
    previous_assignment: dict[str, str] | None = None,
) -> DailyAllocationProblem:
    """Canonicalize inputs: sort patients and rooms, keep only previous
    placements that reference a patient present today and a room that still
    exists."""
    patients = tuple(
        sorted(
            (
                PatientNeed(n.patient_id, n.gender, n.contagious, n.category)
                for n in needs
            ),
            key=lambda p: p.patient_id,
        )
    )
    rooms = tuple(sorted(ward.rooms, key=lambda r: r.room_id))
    room_ids = {r.room_id for r in rooms}
    present = {p.patient_id for p in patients}
    previous = {
        p: r
        for p, r in (previous_assignment or {}).items()
        if p in present and r in room_ids
    }
    return DailyAllocationProblem(day, patients, rooms, previous)
