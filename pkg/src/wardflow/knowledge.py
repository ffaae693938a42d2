"""Declarative ward knowledge: rooms, bed-bay categories, treatments, diagnoses.

Everything ward-specific lives in a knowledge document; downstream modules
(simulator, encoder, solver) are configured from a loaded KnowledgeBase and
hard-code nothing about a concrete ward.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class KnowledgeError(Exception):
    """Base class for knowledge document problems."""


class KnowledgeParseError(KnowledgeError):
    """Malformed knowledge document (unknown key, bad syntax)."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class KnowledgeValidationError(KnowledgeError):
    """Well-formed document with inconsistent content (cycle, duplicate id, ...)."""


class UnknownDiagnosisError(KnowledgeError):
    def __init__(self, diagnosis: str):
        self.diagnosis = diagnosis
        super().__init__(f"unknown diagnosis: {diagnosis!r}")


@dataclass(frozen=True)
class BedBayCategory:
    """Care-level class of a bed bay. Lower level = stricter care requirement."""

    name: str
    level: int


@dataclass(frozen=True)
class Room:
    room_id: str
    capacity: int
    category: BedBayCategory


@dataclass(frozen=True)
class Ward:
    ward_id: str
    rooms: tuple[Room, ...]

    @property
    def total_capacity(self) -> int:
        return sum(r.capacity for r in self.rooms)

    def room(self, room_id: str) -> Room:
        for r in self.rooms:
            if r.room_id == room_id:
                return r
        raise KeyError(room_id)


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    duration_days: int
    required_category: BedBayCategory


@dataclass(frozen=True)
class Treatment:
    """A diagnosis' task set plus ordering constraints (a DAG over task ids)."""

    treatment_id: str
    tasks: tuple[TaskSpec, ...]
    dependencies: tuple[tuple[str, str], ...]  # (before, after) pairs

    def task(self, task_id: str) -> TaskSpec:
        for t in self.tasks:
            if t.task_id == task_id:
                return t
        raise KeyError(task_id)

    def predecessors_of(self, task_id: str) -> set[str]:
        return {before for before, after in self.dependencies if after == task_id}

    @property
    def total_duration(self) -> int:
        return sum(t.duration_days for t in self.tasks)

    def topological_order(self) -> list[str]:
        """Kahn's algorithm with smallest-task_id tie-break; raises on a cycle."""
        remaining = {t.task_id for t in self.tasks}
        done: set[str] = set()
        order: list[str] = []
        while remaining:
            ready = sorted(
                t for t in remaining if self.predecessors_of(t) <= done
            )
            if not ready:
                raise KnowledgeValidationError(
                    f"treatment {self.treatment_id!r}: cyclic dependencies: "
                    + _describe_cycle(remaining, self.dependencies)
                )
            order.append(ready[0])
            done.add(ready[0])
            remaining.remove(ready[0])
        return order


def _describe_cycle(nodes: set[str], edges: tuple[tuple[str, str], ...]) -> str:
    # Walk successor edges inside the stuck node set until a node repeats.
    succ = {n: sorted(b for a, b in edges if a == n and b in nodes) for n in nodes}
    start = sorted(nodes)[0]
    path = [start]
    seen = {start}
    node = start
    while succ.get(node):
        node = succ[node][0]
        if node in seen:
            path = path[path.index(node):] + [node]
            return " -> ".join(path)
        path.append(node)
        seen.add(node)
    return " -> ".join(path)


@dataclass(frozen=True)
class KnowledgeBase:
    """Loaded ward configuration; immutable and safe to share once built."""

    ward: Ward
    treatments_by_id: dict[str, Treatment]
    diagnosis_map: dict[str, str]  # diagnosis label -> treatment_id
    categories: tuple[BedBayCategory, ...]  # ordered by level, strictest first

    @property
    def treatments(self) -> dict[str, Treatment]:
        """Map from diagnosis label to its Treatment."""
        return {d: self.treatments_by_id[t] for d, t in self.diagnosis_map.items()}

    def category(self, name: str) -> BedBayCategory:
        for c in self.categories:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def diagnoses(self) -> list[str]:
        return sorted(self.diagnosis_map)


def treatment_for(kb: KnowledgeBase, diagnosis: str) -> Treatment:
    """Resolve a diagnosis label to its Treatment."""
    treatment_id = kb.diagnosis_map.get(diagnosis)
    if treatment_id is None:
        raise UnknownDiagnosisError(diagnosis)
    return kb.treatments_by_id[treatment_id]


def category_leq(a: BedBayCategory, b: BedBayCategory) -> bool:
    """Room-suitability order: a room serves a need iff room.category <= need."""
    return a.level <= b.level


# --- knowledge document parsing -------------------------------------------
#
# categories: HighMonitoring=0, Intermediate=1, Standard=2
# room <room_id> capacity=<int> category=<name>
# treatment <treatment_id>:
#   task <task_id> duration=<int>d category=<name>
#   dep <before> -> <after>
# diagnosis <label> -> <treatment_id>
#
# '#' starts a comment; unknown keys are errors.

_ID = r"[A-Za-z0-9][A-Za-z0-9_.\-]*"
_ROOM_RE = re.compile(rf"^room\s+({_ID})\s+capacity=(\d+)\s+category=({_ID})$")
_TREATMENT_RE = re.compile(rf"^treatment\s+({_ID})\s*:$")
_TASK_RE = re.compile(rf"^task\s+({_ID})\s+duration=(\d+)d\s+category=({_ID})$")
_DEP_RE = re.compile(rf"^dep\s+({_ID})\s*->\s*({_ID})$")
_DIAGNOSIS_RE = re.compile(rf"^diagnosis\s+({_ID})\s*->\s*({_ID})$")
_CATEGORY_ITEM_RE = re.compile(rf"^({_ID})=(\d+)$")


class _Parser:
    def __init__(self, ward_id: str):
        self.ward_id = ward_id
        self.categories: dict[str, BedBayCategory] = {}
        self.rooms: list[Room] = []
        self.treatments: dict[str, Treatment] = {}
        self.diagnosis_map: dict[str, str] = {}
        self.diagnosis_lines: dict[str, int] = {}
        # open treatment block, if any
        self.block_id: str | None = None
        self.block_tasks: list[TaskSpec] = []
        self.block_deps: list[tuple[str, str]] = []
        self.block_line = 0

    def feed(self, line: str, line_no: int) -> None:
        body = line.split("#", 1)[0].strip()
        if not body:
            return
        key = body.split(None, 1)[0].rstrip(":")
        if key in ("task", "dep"):
            if self.block_id is None:
                raise KnowledgeParseError(f"{key!r} outside a treatment block", line_no)
            self._feed_block(body, line_no)
            return
        self._close_block()
        if key == "categories":
            self._parse_categories(body, line_no)
        elif key == "room":
            self._parse_room(body, line_no)
        elif key == "treatment":
            m = _TREATMENT_RE.match(body)
            if not m:
                raise KnowledgeParseError("expected 'treatment <id>:'", line_no)
            if m.group(1) in self.treatments:
                raise KnowledgeValidationError(
                    f"line {line_no}: duplicate treatment id {m.group(1)!r}"
                )
            self.block_id = m.group(1)
            self.block_tasks = []
            self.block_deps = []
            self.block_line = line_no
        elif key == "diagnosis":
            m = _DIAGNOSIS_RE.match(body)
            if not m:
                raise KnowledgeParseError("expected 'diagnosis <label> -> <treatment_id>'", line_no)
            label, target = m.groups()
            if label in self.diagnosis_map:
                raise KnowledgeValidationError(f"line {line_no}: duplicate diagnosis {label!r}")
            self.diagnosis_map[label] = target
            self.diagnosis_lines[label] = line_no
        else:
            raise KnowledgeParseError(f"unknown key {key!r}", line_no)

    def _parse_categories(self, body: str, line_no: int) -> None:
        if self.categories:
            raise KnowledgeValidationError(f"line {line_no}: duplicate 'categories:' line")
        _, _, items = body.partition(":")
        if not items.strip():
            raise KnowledgeParseError("empty categories list", line_no)
        for item in items.split(","):
            m = _CATEGORY_ITEM_RE.match(item.strip())
            if not m:
                raise KnowledgeParseError(f"bad category item {item.strip()!r}", line_no)
            name, level = m.group(1), int(m.group(2))
            if name in self.categories:
                raise KnowledgeValidationError(f"line {line_no}: duplicate category {name!r}")
            if any(c.level == level for c in self.categories.values()):
                raise KnowledgeValidationError(
                    f"line {line_no}: category level {level} used twice"
                )
            self.categories[name] = BedBayCategory(name, level)

    def _category(self, name: str, line_no: int) -> BedBayCategory:
        cat = self.categories.get(name)
        if cat is None:
            raise KnowledgeValidationError(f"line {line_no}: unknown category {name!r}")
        return cat

    def _parse_room(self, body: str, line_no: int) -> None:
        m = _ROOM_RE.match(body)
        if not m:
            raise KnowledgeParseError("expected 'room <id> capacity=<int> category=<name>'", line_no)
        room_id, capacity, cat_name = m.group(1), int(m.group(2)), m.group(3)
        if any(r.room_id == room_id for r in self.rooms):
            raise KnowledgeValidationError(f"line {line_no}: duplicate room id {room_id!r}")
        if capacity < 1:
            raise KnowledgeValidationError(f"line {line_no}: room {room_id!r} capacity must be >= 1")
        self.rooms.append(Room(room_id, capacity, self._category(cat_name, line_no)))

    def _feed_block(self, body: str, line_no: int) -> None:
        m = _TASK_RE.match(body)
        if m:
            task_id, duration, cat_name = m.group(1), int(m.group(2)), m.group(3)
            if any(t.task_id == task_id for t in self.block_tasks):
                raise KnowledgeValidationError(
                    f"line {line_no}: duplicate task {task_id!r} in treatment {self.block_id!r}"
                )
            if duration < 1:
                raise KnowledgeValidationError(
                    f"line {line_no}: task {task_id!r} duration must be >= 1 day"
                )
            self.block_tasks.append(TaskSpec(task_id, duration, self._category(cat_name, line_no)))
            return
        m = _DEP_RE.match(body)
        if m:
            self.block_deps.append((m.group(1), m.group(2)))
            return
        raise KnowledgeParseError("expected 'task ...' or 'dep <before> -> <after>'", line_no)

    def _close_block(self) -> None:
        if self.block_id is None:
            return
        if not self.block_tasks:
            raise KnowledgeValidationError(
                f"line {self.block_line}: treatment {self.block_id!r} has no tasks"
            )
        task_ids = {t.task_id for t in self.block_tasks}
        for before, after in self.block_deps:
            for end in (before, after):
                if end not in task_ids:
                    raise KnowledgeValidationError(
                        f"treatment {self.block_id!r}: dependency references unknown task {end!r}"
                    )
        treatment = Treatment(self.block_id, tuple(self.block_tasks), tuple(self.block_deps))
        treatment.topological_order()  # raises KnowledgeValidationError on a cycle
        self.treatments[self.block_id] = treatment
        self.block_id = None

    def finish(self) -> KnowledgeBase:
        self._close_block()
        if not self.categories:
            raise KnowledgeValidationError("document defines no categories")
        if not self.rooms:
            raise KnowledgeValidationError("document defines no rooms")
        for label, target in self.diagnosis_map.items():
            if target not in self.treatments:
                raise KnowledgeValidationError(
                    f"line {self.diagnosis_lines[label]}: diagnosis {label!r} "
                    f"maps to unknown treatment {target!r}"
                )
        ordered = tuple(sorted(self.categories.values(), key=lambda c: c.level))
        return KnowledgeBase(
            ward=Ward(self.ward_id, tuple(self.rooms)),
            treatments_by_id=self.treatments,
            diagnosis_map=self.diagnosis_map,
            categories=ordered,
        )


def load_knowledge(text: str, ward_id: str = "ward") -> KnowledgeBase:
    """Parse and validate a knowledge document.

    The ward id is not part of the document; it is the key under which the
    document is stored (e.g. the /wards/{id} resource).
    """
    parser = _Parser(ward_id)
    for line_no, line in enumerate(text.splitlines(), start=1):
        parser.feed(line, line_no)
    return parser.finish()


def dump_knowledge(kb: KnowledgeBase) -> str:
    """Serialize a KnowledgeBase back to the document format (round-trip safe)."""
    lines = [
        "categories: " + ", ".join(f"{c.name}={c.level}" for c in kb.categories)
    ]
    for r in kb.ward.rooms:
        lines.append(f"room {r.room_id} capacity={r.capacity} category={r.category.name}")
    for treatment in kb.treatments_by_id.values():
        lines.append(f"treatment {treatment.treatment_id}:")
        for t in treatment.tasks:
            lines.append(
                f"  task {t.task_id} duration={t.duration_days}d"
                f" category={t.required_category.name}"
            )
        for before, after in treatment.dependencies:
            lines.append(f"  dep {before} -> {after}")
    for label, target in kb.diagnosis_map.items():
        lines.append(f"diagnosis {label} -> {target}")
    return "\n".join(lines) + "\n"
