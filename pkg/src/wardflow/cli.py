"""The wardflow command line tool."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import driver
from .encoder import encode
from .knowledge import load_knowledge
from .patients import generate_scenario, ingest_patients
from .simulator import simulate, timeline_to_csv
from .solver import SolverBudgetError, solve
from .store import DataStore


@click.group()
@click.option(
    "--data-dir",
    envvar="WARDFLOW_DATA",
    default="wardflow-data",
    show_default=True,
    help="Directory holding the local data store.",
)
@click.pass_context
def main(ctx: click.Context, data_dir: str) -> None:
    """Ward planning: ingest patient streams, simulate bed needs, solve
    per-day allocations and compare what-if plans."""
    ctx.obj = DataStore(data_dir)


@main.command("load-ward")
@click.option("--ward", "ward_id", required=True)
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def load_ward(store: DataStore, ward_id: str, path: str) -> None:
    """Validate and store a ward knowledge document."""
    document = Path(path).read_text(encoding="utf-8")
    kb = load_knowledge(document, ward_id)
    version = store.put_ward(ward_id, document)
    click.echo(
        f"ward {ward_id} v{version}: {len(kb.ward.rooms)} rooms, "
        f"{kb.ward.total_capacity} bed bays, {len(kb.treatments_by_id)} treatments"
    )


@main.command()
@click.option("--scenario", "scenario_id", required=True)
@click.option("--ward", "ward_id", required=True)
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--horizon", type=int, default=None, help="Override the planning horizon.")
@click.pass_obj
def ingest(store: DataStore, scenario_id: str, ward_id: str, path: str, horizon: int | None) -> None:
    """Ingest a patient CSV into a new scenario."""
    kb = load_knowledge(store.get_ward(ward_id)[0], ward_id)
    source = Path(path).read_text(encoding="utf-8")
    scenario = ingest_patients(source, scenario_id, ward_id, kb, horizon_days=horizon)
    store.create_scenario(scenario)
    click.echo(
        f"scenario {scenario_id}: {len(scenario.patients)} patients, "
        f"horizon {scenario.horizon_days} days"
    )


@main.command("gen-scenario")
@click.option("--scenario", "scenario_id", required=True)
@click.option("--ward", "ward_id", required=True)
@click.option("--patients", type=int, required=True)
@click.option("--days", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--contagion-rate", type=float, default=0.1, show_default=True)
@click.pass_obj
def gen_scenario(
    store: DataStore,
    scenario_id: str,
    ward_id: str,
    patients: int,
    days: int,
    seed: int,
    contagion_rate: float,
) -> None:
    """Generate a seeded synthetic scenario."""
    kb = load_knowledge(store.get_ward(ward_id)[0], ward_id)
    scenario = generate_scenario(
        scenario_id, ward_id, kb, patients, days, seed, contagion_rate
    )
    store.create_scenario(scenario)
    click.echo(f"scenario {scenario_id}: {patients} patients over {days} days (seed {seed})")


@main.command("simulate")
@click.option("--scenario", "scenario_id", required=True)
@click.option("--parallel-tasks", is_flag=True, default=False)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_obj
def simulate_cmd(store: DataStore, scenario_id: str, parallel_tasks: bool, out_path: str) -> None:
    """Simulate a scenario into a bed-need timeline CSV."""
    scenario, _ = store.get_scenario(scenario_id)
    kb = load_knowledge(store.get_ward(scenario.ward_ref)[0], scenario.ward_ref)
    timeline = simulate(scenario, kb, parallel=parallel_tasks)
    Path(out_path).write_text(timeline_to_csv(timeline), encoding="utf-8")
    click.echo(f"timeline: days 1..{timeline.last_day} written to {out_path}")


@main.command("encode")
@click.option("--scenario", "scenario_id", required=True)
@click.option("--day", type=int, required=True)
@click.option("--dump", "dump_path", required=True, type=click.Path(dir_okay=False))
@click.option("--parallel-tasks", is_flag=True, default=False)
@click.pass_obj
def encode_cmd(store: DataStore, scenario_id: str, day: int, dump_path: str, parallel_tasks: bool) -> None:
    """Dump one day's constraint system in its portable text form.

    Solves the preceding days first to recover the carried assignment.
    """
    config = driver.PlanConfig(parallel_tasks=parallel_tasks)
    problem = driver.build_day_problem(store, scenario_id, day, config)
    system = encode(problem)
    Path(dump_path).write_text(system.dump(), encoding="utf-8")
    click.echo(
        f"day {day}: {len(system.assignment_vars)} placement vars, "
        f"{len(system.hard_clauses)} clauses written to {dump_path}"
    )


@main.command("solve-day")
@click.option("--scenario", "scenario_id", required=True)
@click.option("--day", type=int, required=True)
@click.option("--budget-secs", type=float, default=60.0, show_default=True)
@click.option("--parallel-tasks", is_flag=True, default=False)
@click.pass_obj
def solve_day(store: DataStore, scenario_id: str, day: int, budget_secs: float, parallel_tasks: bool) -> None:
    """Solve a single day and print the allocation record."""
    config = driver.PlanConfig(parallel_tasks=parallel_tasks, budget_secs=budget_secs)
    problem = driver.build_day_problem(store, scenario_id, day, config)
    try:
        allocation = solve(encode(problem), budget_secs)
    except SolverBudgetError as exc:
        raise click.ClickException(str(exc)) from None
    record = {
        "day": allocation.day,
        "status": allocation.status,
        "assignment": allocation.assignment,
        "room_gender": allocation.room_gender,
        "moves": sorted(allocation.moves),
    }
    click.echo(json.dumps(record, sort_keys=True, indent=2))


@main.command("plan")
@click.option("--scenario", "scenario_id", required=True)
@click.option("--parallel-tasks", is_flag=True, default=False)
@click.option("--budget-secs", type=float, default=60.0, show_default=True)
@click.option("--plan-id", default=None, help="Defaults to the scenario id.")
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False))
@click.pass_obj
def plan_cmd(
    store: DataStore,
    scenario_id: str,
    parallel_tasks: bool,
    budget_secs: float,
    plan_id: str | None,
    out_path: str | None,
) -> None:
    """Run the full pipeline and persist the allocation plan."""
    config = driver.PlanConfig(
        parallel_tasks=parallel_tasks, budget_secs=budget_secs, plan_id=plan_id
    )
    plan = driver.run_plan(store, scenario_id, config)
    document = plan.to_document()
    if out_path:
        Path(out_path).write_text(document, encoding="utf-8")
    t = plan.timings
    click.echo(
        f"plan {plan.plan_id}: {plan.total_days} days, {plan.total_moves} moves, "
        f"{len(plan.infeasible_days)} infeasible, {len(plan.budget_exceeded_days)} over budget"
    )
    click.echo(
        f"phases: simulate {t.simulate_secs:.2f}s, encode {t.encode_secs:.2f}s, "
        f"solve {t.solve_secs:.2f}s",
        err=True,
    )


@main.command("diff-plans")
@click.argument("plan_a")
@click.argument("plan_b")
@click.option("--allow-disjoint", is_flag=True, default=False)
@click.pass_obj
def diff_plans_cmd(store: DataStore, plan_a: str, plan_b: str, allow_disjoint: bool) -> None:
    """Print the structured diff between two stored plans."""
    diff = driver.diff_stored_plans(store, plan_a, plan_b, require_overlap=not allow_disjoint)
    click.echo(json.dumps(diff, sort_keys=True, indent=2))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--data-dir", default=None, help="Overrides the global --data-dir.")
@click.option("--ui-dir", default=None, type=click.Path(file_okay=False), help="Serve a built dashboard from this directory at /ui.")
@click.pass_context
def serve(ctx: click.Context, host: str, port: int, data_dir: str | None, ui_dir: str | None) -> None:
    """Run the planner HTTP service."""
    import uvicorn

    from .service import create_app

    store: DataStore = ctx.obj
    app = create_app(data_dir or store.db_path.parent)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
