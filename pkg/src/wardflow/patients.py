"""Patient records, scenarios, CSV ingestion and the synthetic generator."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, replace

from .knowledge import KnowledgeBase, UnknownDiagnosisError, treatment_for

GENDERS = ("M", "F")


class ScenarioError(Exception):
    """Invalid patient data or scenario payload."""


class CsvParseError(ScenarioError):
    """Malformed patient CSV (bad header, bad field syntax)."""


@dataclass(frozen=True, order=True)
class PatientRecord:
    patient_id: str
    gender: str
    contagious: bool
    diagnosis: str
    arrival_day: int  # day 1 = first simulated day


@dataclass(frozen=True)
class Scenario:
    """A timed stream of incoming patients over a planning horizon."""

    scenario_id: str
    ward_ref: str
    patients: tuple[PatientRecord, ...]
    horizon_days: int

    def with_horizon(self, horizon_days: int) -> "Scenario":
        return replace(self, horizon_days=horizon_days)


def validate_scenario(scenario: Scenario, kb: KnowledgeBase | None = None) -> Scenario:
    """Check scenario invariants; with a kb, also resolve every diagnosis."""
    if scenario.horizon_days < 1:
        raise ScenarioError(f"horizon_days must be >= 1, got {scenario.horizon_days}")
    seen: set[str] = set()
    for p in scenario.patients:
        if p.patient_id in seen:
            raise ScenarioError(f"duplicate patient_id {p.patient_id!r}")
        seen.add(p.patient_id)
        if p.gender not in GENDERS:
            raise ScenarioError(f"patient {p.patient_id!r}: gender must be one of {GENDERS}")
        if p.arrival_day < 1:
            raise ScenarioError(f"patient {p.patient_id!r}: arrival_day must be >= 1")
        if p.arrival_day > scenario.horizon_days:
            raise ScenarioError(
                f"patient {p.patient_id!r}: arrival_day {p.arrival_day} "
                f"exceeds horizon of {scenario.horizon_days} days"
            )
        if kb is not None:
            treatment_for(kb, p.diagnosis)  # raises UnknownDiagnosisError
    return scenario


CSV_HEADER = ["patient_id", "gender", "contagious", "diagnosis", "arrival_day"]


def parse_patients_csv(source: str, kb: KnowledgeBase | None = None) -> list[PatientRecord]:
    """Parse the patient CSV; row numbers in errors count the header as row 1."""
    reader = csv.reader(io.StringIO(source))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvParseError("empty document, expected header row") from None
    if [h.strip() for h in header] != CSV_HEADER:
        raise CsvParseError(f"row 1: expected header {','.join(CSV_HEADER)}")
    patients: list[PatientRecord] = []
    seen: set[str] = set()
    for row_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(CSV_HEADER):
            raise CsvParseError(f"row {row_no}: expected {len(CSV_HEADER)} fields, got {len(row)}")
        patient_id, gender, contagious, diagnosis, arrival = (f.strip() for f in row)
        if patient_id in seen:
            raise ScenarioError(f"row {row_no}: duplicate patient_id {patient_id!r}")
        seen.add(patient_id)
        if gender not in GENDERS:
            raise CsvParseError(f"row {row_no}: gender must be M or F, got {gender!r}")
        if contagious not in ("true", "false"):
            raise CsvParseError(f"row {row_no}: contagious must be true or false, got {contagious!r}")
        try:
            arrival_day = int(arrival)
        except ValueError:
            raise CsvParseError(f"row {row_no}: arrival_day must be an integer, got {arrival!r}") from None
        if arrival_day < 1:
            raise ScenarioError(f"row {row_no}: arrival_day must be >= 1")
        if kb is not None:
            try:
                treatment_for(kb, diagnosis)
            except UnknownDiagnosisError:
                raise ScenarioError(f"row {row_no}: unknown diagnosis {diagnosis!r}") from None
        patients.append(PatientRecord(patient_id, gender, contagious == "true", diagnosis, arrival_day))
    return patients


def ingest_patients(
    source: str,
    scenario_id: str,
    ward_ref: str,
    kb: KnowledgeBase | None = None,
    horizon_days: int | None = None,
) -> Scenario:
    """Build a validated Scenario from CSV text.

    Without an explicit horizon the last arrival day is used (1 for an empty
    stream).
    """
    patients = parse_patients_csv(source, kb)
    if horizon_days is None:
        horizon_days = max((p.arrival_day for p in patients), default=1)
    scenario = Scenario(scenario_id, ward_ref, tuple(patients), horizon_days)
    return validate_scenario(scenario, kb)


def patients_to_csv(patients: tuple[PatientRecord, ...] | list[PatientRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p in patients:
        writer.writerow(
            [p.patient_id, p.gender, "true" if p.contagious else "false", p.diagnosis, p.arrival_day]
        )
    return out.getvalue()


def arrivals_on(scenario: Scenario, day: int) -> list[PatientRecord]:
    """Patients with arrival_day == day, in patient_id order."""
    if not 1 <= day <= scenario.horizon_days:
        raise ValueError(f"day {day} out of range 1..{scenario.horizon_days}")
    return sorted(
        (p for p in scenario.patients if p.arrival_day == day),
        key=lambda p: p.patient_id,
    )


def generate_scenario(
    scenario_id: str,
    ward_ref: str,
    kb: KnowledgeBase,
    n_patients: int,
    days: int,
    seed: int,
    contagion_rate: float = 0.1,
) -> Scenario:
    """Seeded synthetic scenario: uniform arrivals, genders and diagnosis mix.

    Deterministic for a given seed, so generated scenarios can be reproduced
    from their parameters alone.
    """
    if days < 1:
        raise ScenarioError("days must be >= 1")
    if not 0.0 <= contagion_rate <= 1.0:
        raise ScenarioError("contagion_rate must be within [0, 1]")
    rng = random.Random(seed)
    diagnoses = kb.diagnoses
    if not diagnoses:
        raise ScenarioError(f"ward {ward_ref!r} has no diagnoses to draw from")
    width = max(4, len(str(n_patients)))
    patients = tuple(
        PatientRecord(
            patient_id=f"P{i:0{width}d}",
            gender=rng.choice(GENDERS),
            contagious=rng.random() < contagion_rate,
            diagnosis=rng.choice(diagnoses),
            arrival_day=rng.randint(1, days),
        )
        for i in range(1, n_patients + 1)
    )
    return validate_scenario(Scenario(scenario_id, ward_ref, patients, days), kb)
