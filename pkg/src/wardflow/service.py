"""HTTP API over the store, generator and planner.

Plan runs execute asynchronously: POST /scenarios/{id}/plan answers 202 with
a job id to poll on GET /jobs/{id}. One plan job per scenario runs at a time;
a second request while one is active returns the running job. Mutating
endpoints replay their original response when retried with the same
X-Request-Id header.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import driver
from .knowledge import (
    KnowledgeParseError,
    KnowledgeValidationError,
    UnknownDiagnosisError,
    load_knowledge,
)
from .patients import (
    CsvParseError,
    PatientRecord,
    Scenario,
    ScenarioError,
    generate_scenario,
    ingest_patients,
    validate_scenario,
)
from .solver import SolverBudgetError
from .store import (
    AlreadyExistsError,
    DataStore,
    NotFoundError,
    VersionConflictError,
)


class PatientBody(BaseModel):
    patient_id: str
    gender: str
    contagious: bool
    diagnosis: str
    arrival_day: int


class ScenarioBody(BaseModel):
    scenario_id: str | None = None
    ward_ref: str
    horizon_days: int | None = None
    patients: list[PatientBody] | None = None
    csv: str | None = None
    version: int | None = None


class PlanRequestBody(BaseModel):
    parallel_tasks: bool = False
    budget_secs: float | None = 60.0
    reset_carry_on_skip: bool = False
    plan_id: str | None = None


class GenerateBody(BaseModel):
    ward_ref: str
    patients: int = Field(ge=0)
    days: int = Field(ge=1)
    seed: int = 0
    contagion_rate: float = 0.1


@dataclass
class Job:
    job_id: str
    scenario_id: str
    status: str = "running"  # running | done | failed
    plan_id: str | None = None
    error: dict | None = None

    def view(self) -> dict:
        body = {"job_id": self.job_id, "scenario_id": self.scenario_id, "status": self.status}
        if self.plan_id is not None:
            body["plan_id"] = self.plan_id
        if self.error is not None:
            body["error"] = self.error
        return body


class JobManager:
    """Thread-per-job plan runner with single-flight per scenario."""

    def __init__(self, store: DataStore):
        self.store = store
        self.jobs: dict[str, Job] = {}
        self.active_by_scenario: dict[str, str] = {}
        self.lock = threading.Lock()

    def submit(self, scenario_id: str, config: driver.PlanConfig) -> tuple[Job, bool]:
        with self.lock:
            active = self.active_by_scenario.get(scenario_id)
            if active is not None:
                return self.jobs[active], False
            job = Job(job_id=uuid.uuid4().hex, scenario_id=scenario_id)
            self.jobs[job.job_id] = job
            self.active_by_scenario[scenario_id] = job.job_id
        thread = threading.Thread(target=self._run, args=(job, config), daemon=True)
        thread.start()
        return job, True

    def _run(self, job: Job, config: driver.PlanConfig) -> None:
        try:
            plan = driver.run_plan(self.store, job.scenario_id, config)
            with self.lock:
                job.plan_id = plan.plan_id
                job.status = "done"
        except SolverBudgetError as exc:
            self._fail(job, "solver_budget_exceeded", str(exc), http_status=504)
        except NotFoundError as exc:
            self._fail(job, f"{exc.kind}_not_found", str(exc), http_status=404)
        except Exception as exc:  # surface anything else as a failed job
            self._fail(job, "plan_failed", str(exc), http_status=500)
        finally:
            with self.lock:
                self.active_by_scenario.pop(job.scenario_id, None)

    def _fail(self, job: Job, code: str, message: str, http_status: int) -> None:
        with self.lock:
            job.status = "failed"
            job.error = {"code": code, "message": message, "http_status": http_status}

    def get(self, job_id: str) -> Job:
        with self.lock:
            job = self.jobs.get(job_id)
        if job is None:
            raise NotFoundError("job", job_id)
        return job


def _error(status_code: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status_code, content={"code": code, "message": message})


def _scenario_payload(scenario: Scenario, version: int) -> dict:
    return {
        "scenario_id": scenario.scenario_id,
        "ward_ref": scenario.ward_ref,
        "horizon_days": scenario.horizon_days,
        "patients": [
            {
                "patient_id": p.patient_id,
                "gender": p.gender,
                "contagious": p.contagious,
                "diagnosis": p.diagnosis,
                "arrival_day": p.arrival_day,
            }
            for p in scenario.patients
        ],
        "version": version,
    }


def create_app(data_dir: str | Path) -> FastAPI:
    app = FastAPI(title="wardflow planner service")
    store = DataStore(data_dir)
    jobs = JobManager(store)
    app.state.store = store
    app.state.jobs = jobs

    idempotency_cache: dict[tuple[str, str, str], tuple[int, bytes, str | None]] = {}
    cache_lock = threading.Lock()

    @app.middleware("http")
    async def replay_idempotent_retries(request: Request, call_next):
        request_id = request.headers.get("x-request-id")
        if not request_id or request.method not in ("POST", "PUT", "DELETE"):
            return await call_next(request)
        key = (request.method, request.url.path, request_id)
        with cache_lock:
            cached = idempotency_cache.get(key)
        if cached is not None:
            return Response(content=cached[1], status_code=cached[0], media_type=cached[2])
        response = await call_next(request)
        body = b"".join([chunk async for chunk in response.body_iterator])
        with cache_lock:
            idempotency_cache[key] = (response.status_code, body, response.media_type)
        return Response(content=body, status_code=response.status_code, media_type=response.media_type)

    @app.exception_handler(NotFoundError)
    async def not_found(request, exc: NotFoundError):
        return _error(404, f"{exc.kind}_not_found", str(exc))

    @app.exception_handler(VersionConflictError)
    async def version_conflict(request, exc):
        return _error(409, "version_conflict", str(exc))

    @app.exception_handler(AlreadyExistsError)
    async def already_exists(request, exc: AlreadyExistsError):
        return _error(409, f"{exc.kind}_exists", str(exc))

    @app.exception_handler(KnowledgeParseError)
    async def knowledge_parse(request, exc):
        return _error(400, "knowledge_parse_error", str(exc))

    @app.exception_handler(CsvParseError)
    async def csv_parse(request, exc):
        return _error(400, "patient_csv_error", str(exc))

    @app.exception_handler(KnowledgeValidationError)
    async def knowledge_invalid(request, exc):
        return _error(422, "knowledge_invalid", str(exc))

    @app.exception_handler(UnknownDiagnosisError)
    async def unknown_diagnosis(request, exc):
        return _error(422, "unknown_diagnosis", str(exc))

    @app.exception_handler(ScenarioError)
    async def scenario_invalid(request, exc):
        return _error(422, "scenario_invalid", str(exc))

    @app.exception_handler(driver.DisjointPlansError)
    async def disjoint_plans(request, exc):
        return _error(422, "plans_disjoint", str(exc))

    # -- wards ---------------------------------------------------------

    @app.get("/wards")
    def list_wards():
        return {"wards": store.list_wards()}

    @app.get("/wards/{ward_id}")
    def get_ward(ward_id: str):
        document, version = store.get_ward(ward_id)
        return Response(
            content=document, media_type="text/plain", headers={"X-Ward-Version": str(version)}
        )

    @app.put("/wards/{ward_id}")
    async def put_ward(ward_id: str, request: Request):
        document = (await request.body()).decode("utf-8")
        load_knowledge(document, ward_id)  # validate before storing
        version = store.put_ward(ward_id, document)
        return {"ward_id": ward_id, "version": version}

    # -- scenarios -------------------------------------------------------

    def _kb_for(ward_ref: str):
        document, _ = store.get_ward(ward_ref)
        return load_knowledge(document, ward_ref)

    def _scenario_from_body(body: ScenarioBody, scenario_id: str) -> Scenario:
        kb = _kb_for(body.ward_ref)
        if body.csv is not None and body.patients is not None:
            raise ScenarioError("provide either 'patients' or 'csv', not both")
        if body.csv is not None:
            return ingest_patients(
                body.csv, scenario_id, body.ward_ref, kb, horizon_days=body.horizon_days
            )
        patients = tuple(
            PatientRecord(
                p.patient_id, p.gender, p.contagious, p.diagnosis, p.arrival_day
            )
            for p in (body.patients or [])
        )
        horizon = body.horizon_days
        if horizon is None:
            horizon = max((p.arrival_day for p in patients), default=1)
        return validate_scenario(Scenario(scenario_id, body.ward_ref, patients, horizon), kb)

    @app.get("/scenarios")
    def list_scenarios():
        return {"scenarios": store.list_scenarios()}

    @app.post("/scenarios", status_code=201)
    def create_scenario(body: ScenarioBody):
        scenario_id = body.scenario_id or uuid.uuid4().hex
        scenario = _scenario_from_body(body, scenario_id)
        version = store.create_scenario(scenario)
        return _scenario_payload(scenario, version)

    @app.get("/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str):
        scenario, version = store.get_scenario(scenario_id)
        return _scenario_payload(scenario, version)

    @app.put("/scenarios/{scenario_id}")
    def update_scenario(scenario_id: str, body: ScenarioBody):
        if body.version is None:
            return _error(400, "missing_version", "updates must carry the current version")
        scenario = _scenario_from_body(body, scenario_id)
        version = store.update_scenario(scenario, body.version)
        return _scenario_payload(scenario, version)

    @app.delete("/scenarios/{scenario_id}", status_code=204)
    def delete_scenario(scenario_id: str):
        store.delete_scenario(scenario_id)
        return Response(status_code=204)

    @app.post("/scenarios/{scenario_id}/generate", status_code=201)
    def generate(scenario_id: str, body: GenerateBody):
        kb = _kb_for(body.ward_ref)
        scenario = generate_scenario(
            scenario_id,
            body.ward_ref,
            kb,
            n_patients=body.patients,
            days=body.days,
            seed=body.seed,
            contagion_rate=body.contagion_rate,
        )
        version = store.create_scenario(scenario)
        return _scenario_payload(scenario, version)

    # -- plans and jobs ----------------------------------------------------

    @app.post("/scenarios/{scenario_id}/plan", status_code=202)
    def start_plan(scenario_id: str, body: PlanRequestBody | None = None):
        store.get_scenario(scenario_id)  # 404 before queueing
        body = body or PlanRequestBody()
        config = driver.PlanConfig(
            parallel_tasks=body.parallel_tasks,
            budget_secs=body.budget_secs,
            reset_carry_on_skip=body.reset_carry_on_skip,
            plan_id=body.plan_id,
        )
        job, _ = jobs.submit(scenario_id, config)
        return job.view()

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        job = jobs.get(job_id)
        view = job.view()
        if job.status == "done" and job.plan_id is not None:
            view["plan"] = driver.load_plan_payload(store, job.plan_id)
        return view

    @app.get("/plans/{plan_id}")
    def get_plan(plan_id: str):
        document = store.get_plan(plan_id)
        # exact stored bytes, so API plans compare equal to library plans
        return Response(content=document, media_type="application/json")

    @app.get("/plans/{plan_a}/diff/{plan_b}")
    def get_diff(plan_a: str, plan_b: str, require_overlap: bool = True):
        return driver.diff_stored_plans(store, plan_a, plan_b, require_overlap)

    return app
