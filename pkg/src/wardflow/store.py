"""Embedded local data store for wards, scenarios and plans (SQLite-backed).

Concurrent readers are fine; writes run in short transactions. Scenario
updates use optimistic versioning: a stale write raises VersionConflictError
instead of merging.
"""

from __future__ import annotations

import json
import sqlite3
from contextlib import contextmanager
from pathlib import Path

from .patients import PatientRecord, Scenario


class StoreError(Exception):
    pass


class NotFoundError(StoreError):
    def __init__(self, kind: str, key: str):
        self.kind = kind
        self.key = key
        super().__init__(f"{kind} {key!r} not found")


class AlreadyExistsError(StoreError):
    def __init__(self, kind: str, key: str):
        self.kind = kind
        self.key = key
        super().__init__(f"{kind} {key!r} already exists")


class VersionConflictError(StoreError):
    def __init__(self, kind: str, key: str, expected: int):
        super().__init__(f"{kind} {key!r}: version {expected} is stale")


_SCHEMA = """
CREATE TABLE IF NOT EXISTS wards (
    ward_id  TEXT PRIMARY KEY,
    document TEXT NOT NULL,
    version  INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS scenarios (
    scenario_id   TEXT PRIMARY KEY,
    ward_ref      TEXT NOT NULL,
    horizon_days  INTEGER NOT NULL,
    patients_json TEXT NOT NULL,
    version       INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS plans (
    plan_id     TEXT PRIMARY KEY,
    scenario_id TEXT NOT NULL,
    document    TEXT NOT NULL
);
"""


def _patients_to_json(patients: tuple[PatientRecord, ...]) -> str:
    return json.dumps(
        [
            {
                "patient_id": p.patient_id,
                "gender": p.gender,
                "contagious": p.contagious,
                "diagnosis": p.diagnosis,
                "arrival_day": p.arrival_day,
            }
            for p in patients
        ]
    )


def _patients_from_json(text: str) -> tuple[PatientRecord, ...]:
    return tuple(PatientRecord(**row) for row in json.loads(text))


class DataStore:
    """One store per data directory; every method opens its own connection."""

    def __init__(self, path: str | Path):
        path = Path(path)
        if path.suffix != ".db":
            path.mkdir(parents=True, exist_ok=True)
            path = path / "wardflow.db"
        self.db_path = path
        with self._connect() as conn:
            conn.executescript(_SCHEMA)

    @contextmanager
    def _connect(self):
        conn = sqlite3.connect(self.db_path, timeout=30.0)
        try:
            yield conn
            conn.commit()
        except Exception:
            conn.rollback()
            raise
        finally:
            conn.close()

    # -- wards ---------------------------------------------------------

    def put_ward(self, ward_id: str, document: str) -> int:
        """Upsert a knowledge document; returns the new version."""
        with self._connect() as conn:
            row = conn.execute(
                "SELECT version FROM wards WHERE ward_id = ?", (ward_id,)
            ).fetchone()
            version = (row[0] + 1) if row else 1
            conn.execute(
                "INSERT INTO wards (ward_id, document, version) VALUES (?, ?, ?) "
                "ON CONFLICT(ward_id) DO UPDATE SET document = ?, version = ?",
                (ward_id, document, version, document, version),
            )
        return version

    def get_ward(self, ward_id: str) -> tuple[str, int]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT document, version FROM wards WHERE ward_id = ?", (ward_id,)
            ).fetchone()
        if row is None:
            raise NotFoundError("ward", ward_id)
        return row[0], row[1]

    def list_wards(self) -> list[str]:
        with self._connect() as conn:
            rows = conn.execute("SELECT ward_id FROM wards ORDER BY ward_id").fetchall()
        return [r[0] for r in rows]

    # -- scenarios -------------------------------------------------------

    def create_scenario(self, scenario: Scenario) -> int:
        with self._connect() as conn:
            try:
                conn.execute(
                    "INSERT INTO scenarios VALUES (?, ?, ?, ?, 1)",
                    (
                        scenario.scenario_id,
                        scenario.ward_ref,
                        scenario.horizon_days,
                        _patients_to_json(scenario.patients),
                    ),
                )
            except sqlite3.IntegrityError:
                raise AlreadyExistsError("scenario", scenario.scenario_id) from None
        return 1

    def get_scenario(self, scenario_id: str) -> tuple[Scenario, int]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT ward_ref, horizon_days, patients_json, version "
                "FROM scenarios WHERE scenario_id = ?",
                (scenario_id,),
            ).fetchone()
        if row is None:
            raise NotFoundError("scenario", scenario_id)
        scenario = Scenario(scenario_id, row[0], _patients_from_json(row[2]), row[1])
        return scenario, row[3]

    def update_scenario(self, scenario: Scenario, expected_version: int) -> int:
        with self._connect() as conn:
            cur = conn.execute(
                "UPDATE scenarios SET ward_ref = ?, horizon_days = ?, "
                "patients_json = ?, version = version + 1 "
                "WHERE scenario_id = ? AND version = ?",
                (
                    scenario.ward_ref,
                    scenario.horizon_days,
                    _patients_to_json(scenario.patients),
                    scenario.scenario_id,
                    expected_version,
                ),
            )
            if cur.rowcount == 0:
                exists = conn.execute(
                    "SELECT 1 FROM scenarios WHERE scenario_id = ?",
                    (scenario.scenario_id,),
                ).fetchone()
                if exists is None:
                    raise NotFoundError("scenario", scenario.scenario_id)
                raise VersionConflictError("scenario", scenario.scenario_id, expected_version)
        return expected_version + 1

    def delete_scenario(self, scenario_id: str) -> None:
        """Delete a scenario; cascades to its stored plans."""
        with self._connect() as conn:
            cur = conn.execute("DELETE FROM scenarios WHERE scenario_id = ?", (scenario_id,))
            if cur.rowcount == 0:
                raise NotFoundError("scenario", scenario_id)
            conn.execute("DELETE FROM plans WHERE scenario_id = ?", (scenario_id,))

    def list_scenarios(self) -> list[str]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT scenario_id FROM scenarios ORDER BY scenario_id"
            ).fetchall()
        return [r[0] for r in rows]

    # -- plans -----------------------------------------------------------

    def put_plan(self, plan_id: str, scenario_id: str, document: str) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO plans VALUES (?, ?, ?) "
                "ON CONFLICT(plan_id) DO UPDATE SET scenario_id = ?, document = ?",
                (plan_id, scenario_id, document, scenario_id, document),
            )

    def get_plan(self, plan_id: str) -> str:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT document FROM plans WHERE plan_id = ?", (plan_id,)
            ).fetchone()
        if row is None:
            raise NotFoundError("plan", plan_id)
        return row[0]

    def list_plans(self, scenario_id: str | None = None) -> list[str]:
        query = "SELECT plan_id FROM plans"
        args: tuple = ()
        if scenario_id is not None:
            query += " WHERE scenario_id = ?"
            args = (scenario_id,)
        with self._connect() as conn:
            rows = conn.execute(query + " ORDER BY plan_id", args).fetchall()
        return [r[0] for r in rows]
