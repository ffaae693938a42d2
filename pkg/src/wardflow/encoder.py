"""Constraint encoding of one day's allocation problem.

The hard constraints conjoin five clause families over boolean placement
variables a[p,r], per-room gender variables g[r] and boolean move variables
c[p] (for returning patients only):

  * exactly-one:   every patient is placed in exactly one room
  * at-most:       room occupancy never exceeds bed-bay capacity
  * gender-link:   a placed patient fixes the room's gender to their own
  * not-both:      a contagious patient shares a room with nobody
  * forbid:        rooms whose category is less strict than the need are off
  * keep-or-move:  a returning patient either keeps yesterday's room or pays
                   one move

The objective minimizes the number of paid moves. Gender variables are
auxiliary: a placement map is encodable iff some room-gender labeling
satisfies the gender links.
"""

from __future__ import annotations

from dataclasses import dataclass

from .knowledge import category_leq
from .problem import DailyAllocationProblem

AKey = tuple[str, str]  # (patient_id, room_id)


def avar_name(patient_id: str, room_id: str) -> str:
    return f"a[{patient_id},{room_id}]"


def gvar_name(room_id: str) -> str:
    return f"g[{room_id}]"


def cvar_name(patient_id: str) -> str:
    return f"c[{patient_id}]"


@dataclass(frozen=True)
class ExactlyOne:
    avars: tuple[AKey, ...]

    def evaluate(self, avals, gvals, cvals) -> bool:
        return sum(avals[v] for v in self.avars) == 1

    def dump(self) -> str:
        return "exactly-one " + " ".join(avar_name(*v) for v in self.avars)


@dataclass(frozen=True)
class AtMost:
    k: int
    avars: tuple[AKey, ...]

    def evaluate(self, avals, gvals, cvals) -> bool:
        return sum(avals[v] for v in self.avars) <= self.k

    def dump(self) -> str:
        return f"at-most {self.k} " + " ".join(avar_name(*v) for v in self.avars)


@dataclass(frozen=True)
class GenderLink:
    avar: AKey
    room_id: str
    gender: str

    def evaluate(self, avals, gvals, cvals) -> bool:
        return not avals[self.avar] or gvals[self.room_id] == self.gender

    def dump(self) -> str:
        return f"gender-link {avar_name(*self.avar)} {gvar_name(self.room_id)}={self.gender}"


@dataclass(frozen=True)
class NotBoth:
    a: AKey
    b: AKey

    def evaluate(self, avals, gvals, cvals) -> bool:
        return not (avals[self.a] and avals[self.b])

    def dump(self) -> str:
        return f"not-both {avar_name(*self.a)} {avar_name(*self.b)}"


@dataclass(frozen=True)
class Forbid:
    avar: AKey

    def evaluate(self, avals, gvals, cvals) -> bool:
        return not avals[self.avar]

    def dump(self) -> str:
        return f"forbid {avar_name(*self.avar)}"


@dataclass(frozen=True)
class KeepOrMove:
    avar: AKey  # a[p, previous room of p]
    patient_id: str

    def evaluate(self, avals, gvals, cvals) -> bool:
        return avals[self.avar] or cvals[self.patient_id]

    def dump(self) -> str:
        return f"keep-or-move {avar_name(*self.avar)} {cvar_name(self.patient_id)}"


Clause = ExactlyOne | AtMost | GenderLink | NotBoth | Forbid | KeepOrMove


@dataclass(frozen=True)
class ConstraintSystem:
    """Complete constraint system for one day, plus the problem it encodes."""

    problem: DailyAllocationProblem
    assignment_vars: tuple[AKey, ...]
    room_gender_vars: tuple[str, ...]
    move_vars: tuple[str, ...]
    hard_clauses: tuple[Clause, ...]

    @property
    def day(self) -> int:
        return self.problem.day

    def evaluate(
        self,
        avals: dict[AKey, bool],
        gvals: dict[str, str],
        cvals: dict[str, bool],
    ) -> bool:
        """True iff every hard clause holds under the total assignment."""
        return all(c.evaluate(avals, gvals, cvals) for c in self.hard_clauses)

    def objective_value(self, cvals: dict[str, bool]) -> int:
        return sum(cvals[p] for p in self.move_vars)

    def dump(self) -> str:
        """Portable text form, one clause per line; stable for golden tests."""
        lines = [
            f"problem day={self.day} "
            f"patients={len(self.problem.patients)} rooms={len(self.problem.rooms)}"
        ]
        lines += [f"var {avar_name(*v)} bool" for v in self.assignment_vars]
        lines += [f"var {gvar_name(r)} gender" for r in self.room_gender_vars]
        lines += [f"var {cvar_name(p)} bool" for p in self.move_vars]
        lines += [c.dump() for c in self.hard_clauses]
        objective = " + ".join(cvar_name(p) for p in self.move_vars) or "0"
        lines.append(f"minimize {objective}")
        return "\n".join(lines) + "\n"


def encode(problem: DailyAllocationProblem) -> ConstraintSystem:
    """Build the day's constraint system; pure in the problem."""
    patients = problem.patients
    rooms = problem.rooms
    avars = tuple((p.patient_id, r.room_id) for p in patients for r in rooms)
    clauses: list[Clause] = []

    for p in patients:
        clauses.append(ExactlyOne(tuple((p.patient_id, r.room_id) for r in rooms)))
    if patients:
        for r in rooms:
            clauses.append(
                AtMost(r.capacity, tuple((p.patient_id, r.room_id) for p in patients))
            )
    for p in patients:
        for r in rooms:
            clauses.append(GenderLink((p.patient_id, r.room_id), r.room_id, p.gender))
    for i, p in enumerate(patients):
        for q in patients[i + 1:]:
            if not (p.contagious or q.contagious):
                continue
            for r in rooms:
                clauses.append(
                    NotBoth((p.patient_id, r.room_id), (q.patient_id, r.room_id))
                )
    for p in patients:
        for r in rooms:
            if not category_leq(r.category, p.need_category):
                clauses.append(Forbid((p.patient_id, r.room_id)))
    move_vars = []
    for p in patients:
        prev = problem.previous_assignment.get(p.patient_id)
        if prev is not None:
            clauses.append(KeepOrMove((p.patient_id, prev), p.patient_id))
            move_vars.append(p.patient_id)

    return ConstraintSystem(
        problem=problem,
        assignment_vars=avars,
        room_gender_vars=tuple(r.room_id for r in rooms),
        move_vars=tuple(move_vars),
        hard_clauses=tuple(clauses),
    )


def assignment_to_values(
    problem: DailyAllocationProblem,
    assignment: dict[str, str],
    gender_default: str = "M",
) -> tuple[dict[AKey, bool], dict[str, str], dict[str, bool]]:
    """Translate a patient->room map into total variable values.

    Gender variables take the occupants' gender (the default label for empty
    rooms); move variables flag patients placed away from their previous room.
    """
    avals = {
        (p.patient_id, r.room_id): assignment.get(p.patient_id) == r.room_id
        for p in problem.patients
        for r in problem.rooms
    }
    gvals = {r.room_id: gender_default for r in problem.rooms}
    for p in problem.patients:
        room = assignment.get(p.patient_id)
        if room is not None:
            gvals[room] = p.gender
    cvals = {
        p: assignment.get(p) != r for p, r in problem.previous_assignment.items()
    }
    return avals, gvals, cvals
