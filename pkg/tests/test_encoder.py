import itertools

from wardflow.encoder import (
    Forbid,
    KeepOrMove,
    NotBoth,
    assignment_to_values,
    encode,
)
from wardflow.knowledge import BedBayCategory, Room
from wardflow.problem import DailyAllocationProblem, PatientNeed
from wardflow.validation import placement_violations

from support import CATEGORIES

HIGH, MID, STD = CATEGORIES


def make_problem(patients, rooms, previous=None, day=1):
    return DailyAllocationProblem(
        day,
        tuple(sorted(patients, key=lambda p: p.patient_id)),
        tuple(sorted(rooms, key=lambda r: r.room_id)),
        previous or {},
    )


def test_empty_patient_set():
    system = encode(make_problem([], [Room("R1", 1, STD), Room("R2", 2, STD)]))
    assert system.assignment_vars == ()
    assert system.room_gender_vars == ("R1", "R2")
    assert system.move_vars == ()
    # nothing to constrain beyond the gender-variable domain
    assert system.hard_clauses == ()
    assert system.objective_value({}) == 0
    assert system.evaluate({}, {"R1": "M", "R2": "F"}, {})


def test_variable_counts_without_previous():
    patients = [PatientNeed("P1", "M", False, STD), PatientNeed("P2", "F", False, STD)]
    rooms = [Room("R1", 2, STD), Room("R2", 1, STD)]
    system = encode(make_problem(patients, rooms))
    assert len(system.assignment_vars) == 4
    assert len(system.room_gender_vars) == 2
    assert system.move_vars == ()


def test_returning_patient_yields_keep_or_move_clause():
    patients = [PatientNeed("P1", "M", False, STD)]
    rooms = [Room("R1", 1, STD), Room("R2", 1, STD)]
    system = encode(make_problem(patients, rooms, previous={"P1": "R1"}))
    keep = [c for c in system.hard_clauses if isinstance(c, KeepOrMove)]
    assert keep == [KeepOrMove(("P1", "R1"), "P1")]
    assert system.move_vars == ("P1",)
    # objective counts exactly the moved returning patients
    assert system.objective_value({"P1": True}) == 1
    assert system.objective_value({"P1": False}) == 0


def test_category_mismatches_are_forbidden():
    patients = [PatientNeed("P1", "M", False, MID)]
    rooms = [Room("R1", 1, STD), Room("R2", 1, HIGH)]
    system = encode(make_problem(patients, rooms))
    forbidden = {c.avar for c in system.hard_clauses if isinstance(c, Forbid)}
    assert forbidden == {("P1", "R1")}  # Standard room is too lax for a Mid need


def test_contagion_pairs_cover_every_room():
    patients = [
        PatientNeed("P1", "M", True, STD),
        PatientNeed("P2", "M", False, STD),
        PatientNeed("P3", "F", False, STD),
    ]
    rooms = [Room("R1", 2, STD), Room("R2", 2, STD)]
    system = encode(make_problem(patients, rooms))
    pairs = {(c.a[0], c.b[0], c.a[1]) for c in system.hard_clauses if isinstance(c, NotBoth)}
    # P1 is contagious: excluded pairwise with both others in both rooms;
    # P2/P3 may share (they only clash through gender, not contagion)
    assert pairs == {
        ("P1", "P2", "R1"),
        ("P1", "P2", "R2"),
        ("P1", "P3", "R1"),
        ("P1", "P3", "R2"),
    }


def enumerate_assignments(system):
    problem = system.problem
    avar_sets = itertools.product([False, True], repeat=len(system.assignment_vars))
    gvar_sets = list(itertools.product("MF", repeat=len(system.room_gender_vars)))
    for abits in avar_sets:
        avals = dict(zip(system.assignment_vars, abits))
        assignment = {}
        ok_map = True
        for p in problem.patients:
            rooms = [r.room_id for r in problem.rooms if avals[(p.patient_id, r.room_id)]]
            if len(rooms) == 1:
                assignment[p.patient_id] = rooms[0]
            else:
                ok_map = False
        yield avals, gvar_sets, assignment if ok_map else None


def test_exhaustive_equivalence_on_a_mixed_instance():
    # every total assignment: clauses satisfiable for some gender labeling
    # iff the induced map passes the direct rule checker
    patients = [
        PatientNeed("P1", "M", True, MID),
        PatientNeed("P2", "F", False, STD),
    ]
    rooms = [Room("R1", 2, MID), Room("R2", 1, STD)]
    problem = make_problem(patients, rooms, previous={"P2": "R2"})
    system = encode(problem)
    for avals, gvar_sets, assignment in enumerate_assignments(system):
        cvals = {
            p: assignment is None or assignment.get(p) != r
            for p, r in problem.previous_assignment.items()
        }
        encoded_ok = any(
            system.evaluate(avals, dict(zip(system.room_gender_vars, gbits)), cvals)
            for gbits in gvar_sets
        )
        direct_ok = assignment is not None and not placement_violations(problem, assignment)
        assert encoded_ok == direct_ok
        if assignment is not None:  # soundness direction, assignment-wise
            for gbits in gvar_sets:
                gvals = dict(zip(system.room_gender_vars, gbits))
                if system.evaluate(avals, gvals, cvals):
                    assert direct_ok


def test_minimized_objective_counts_actual_moves():
    patients = [
        PatientNeed("P1", "M", False, STD),
        PatientNeed("P2", "M", False, STD),
    ]
    rooms = [Room("R1", 1, STD), Room("R2", 1, STD), Room("R3", 1, STD)]
    problem = make_problem(patients, rooms, previous={"P1": "R1", "P2": "R2"})
    system = encode(problem)
    # place P1 where it was, move P2
    assignment = {"P1": "R1", "P2": "R3"}
    avals, gvals, cvals = assignment_to_values(problem, assignment)
    assert system.evaluate(avals, gvals, cvals)
    assert cvals == {"P1": False, "P2": True}
    assert system.objective_value(cvals) == 1
    # pointwise-minimal c values are forced by the keep-or-move clauses:
    # flipping the moved flag off must break the system
    assert not system.evaluate(avals, gvals, {"P1": False, "P2": False})


def test_dump_is_stable():
    patients = [PatientNeed("P1", "M", True, STD)]
    rooms = [Room("R1", 2, MID), Room("R2", 1, STD)]
    system = encode(make_problem(patients, rooms, previous={"P1": "R2"}, day=3))
    assert system.dump() == (
        "problem day=3 patients=1 rooms=2\n"
        "var a[P1,R1] bool\n"
        "var a[P1,R2] bool\n"
        "var g[R1] gender\n"
        "var g[R2] gender\n"
        "var c[P1] bool\n"
        "exactly-one a[P1,R1] a[P1,R2]\n"
        "at-most 2 a[P1,R1]\n"
        "at-most 1 a[P1,R2]\n"
        "gender-link a[P1,R1] g[R1]=M\n"
        "gender-link a[P1,R2] g[R2]=M\n"
        "keep-or-move a[P1,R2] c[P1]\n"
        "minimize c[P1]\n"
    )


def test_encode_is_pure():
    patients = [PatientNeed("P1", "F", False, HIGH)]
    rooms = [Room("R1", 1, HIGH)]
    problem = make_problem(patients, rooms)
    assert encode(problem) == encode(problem)


def test_validator_spots_each_violation_kind():
    patients = [
        PatientNeed("P1", "M", True, MID),
        PatientNeed("P2", "F", False, STD),
        PatientNeed("P3", "M", False, STD),
    ]
    rooms = [Room("R1", 2, MID), Room("R2", 1, STD)]
    problem = make_problem(patients, rooms)
    cases = {
        "has no room": {"P1": "R1", "P2": "R2"},
        "mixes genders": {"P1": "R2", "P2": "R1", "P3": "R1"},
        "shares room": {"P1": "R1", "P3": "R1", "P2": "R2"},
        "capacity": {"P1": "R1", "P2": "R2", "P3": "R2"},
        "needs": {"P1": "R2", "P2": "R1", "P3": "R1"},  # P1 needs Mid, R2 is Std
    }
    for expected, assignment in cases.items():
        problems = placement_violations(problem, assignment)
        assert any(expected in v for v in problems), (expected, problems)
    clean = {"P1": "R1", "P2": "R2"}
    solo = make_problem(patients[:2], rooms)
    assert placement_violations(solo, clean) == []
