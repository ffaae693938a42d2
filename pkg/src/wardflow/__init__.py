"""wardflow: ward planning with patient-flow simulation and exact per-day
bed-bay allocation."""

from importlib import resources

from .driver import (
    AllocationPlan,
    PlanConfig,
    diff_plans,
    diff_stored_plans,
    run_plan,
)
from .encoder import ConstraintSystem, encode
from .knowledge import (
    BedBayCategory,
    KnowledgeBase,
    Room,
    TaskSpec,
    Treatment,
    Ward,
    category_leq,
    dump_knowledge,
    load_knowledge,
    treatment_for,
)
from .patients import (
    PatientRecord,
    Scenario,
    arrivals_on,
    generate_scenario,
    ingest_patients,
)
from .problem import DailyAllocationProblem, PatientNeed, problem_for_day
from .simulator import (
    BedNeed,
    BedNeedTimeline,
    Package,
    active_tasks,
    make_package,
    simulate,
    step_day,
)
from .solver import DailyAllocation, SolverBudgetError, oracle_solve, solve
from .store import DataStore
from .validation import allocation_violations, placement_violations

__version__ = "0.1.0"


def example_ward_document() -> str:
    """The bundled example ward knowledge document."""
    return (
        resources.files("wardflow").joinpath("data/example_ward.txt").read_text("utf-8")
    )


__all__ = [
    "AllocationPlan",
    "BedBayCategory",
    "BedNeed",
    "BedNeedTimeline",
    "ConstraintSystem",
    "DailyAllocation",
    "DailyAllocationProblem",
    "DataStore",
    "KnowledgeBase",
    "Package",
    "PatientNeed",
    "PatientRecord",
    "PlanConfig",
    "Room",
    "Scenario",
    "SolverBudgetError",
    "TaskSpec",
    "Treatment",
    "Ward",
    "active_tasks",
    "allocation_violations",
    "arrivals_on",
    "category_leq",
    "diff_plans",
    "diff_stored_plans",
    "dump_knowledge",
    "encode",
    "example_ward_document",
    "generate_scenario",
    "ingest_patients",
    "load_knowledge",
    "make_package",
    "oracle_solve",
    "placement_violations",
    "problem_for_day",
    "run_plan",
    "simulate",
    "solve",
    "step_day",
    "treatment_for",
]
