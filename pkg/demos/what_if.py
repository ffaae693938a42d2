"""What-if exploration: take a scenario, close one room, re-plan, diff.

Run:  python3 demos/what_if.py
"""

import tempfile

from wardflow import (
    DataStore,
    PlanConfig,
    Scenario,
    diff_stored_plans,
    example_ward_document,
    generate_scenario,
    load_knowledge,
    run_plan,
)

doc = example_ward_document()
kb = load_knowledge(doc, "example-ward")

with tempfile.TemporaryDirectory() as tmp:
    store = DataStore(tmp)
    store.put_ward("example-ward", doc)
    scenario = generate_scenario("baseline", "example-ward", kb, 40, 12, seed=5)
    store.create_scenario(scenario)
    baseline = run_plan(store, "baseline", PlanConfig(plan_id="plan-baseline"))
    print(f"baseline: {baseline.total_days} days, {baseline.total_moves} moves, "
          f"{len(baseline.infeasible_days)} infeasible days")

    # what if room R06 (4 standard bays) is closed for renovation?
    shrunk = "\n".join(l for l in doc.splitlines() if not l.startswith("room R06"))
    store.put_ward("ward-less-r06", shrunk)
    store.create_scenario(
        Scenario("smaller-ward", "ward-less-r06", scenario.patients, scenario.horizon_days)
    )
    variant = run_plan(store, "smaller-ward", PlanConfig(plan_id="plan-no-r06"))
    print(f"without R06: {variant.total_days} days, {variant.total_moves} moves, "
          f"{len(variant.infeasible_days)} infeasible days")

    diff = diff_stored_plans(store, "plan-baseline", "plan-no-r06")
    print(f"\nmove delta: {diff['move_delta']:+d}")
    print(f"days newly infeasible: {diff['infeasible_delta']['only_b'] or 'none'}")
    print(f"days with placement differences: {len(diff['days'])}")
    for day in diff["days"][:5]:
        changed = ", ".join(f"{c['patient_id']} {c['room_a']}->{c['room_b']}" for c in day["changed"])
        print(f"  day {day['day']:2d}: {len(day['changed'])} reassigned"
              + (f" ({changed})" if changed else "")
              + (f", dropped: {day['only_a']}" if day["only_a"] else ""))
