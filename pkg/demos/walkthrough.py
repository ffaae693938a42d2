"""A guided tour: ward knowledge -> patient stream -> bed-need timeline ->
per-day allocation plan, printed as day-by-day room grids.

Run:  python3 demos/walkthrough.py
"""

import tempfile

from wardflow import (
    PlanConfig,
    DataStore,
    example_ward_document,
    generate_scenario,
    load_knowledge,
    run_plan,
    simulate,
)

doc = example_ward_document()
kb = load_knowledge(doc, "example-ward")
print(f"ward: {len(kb.ward.rooms)} rooms, {kb.ward.total_capacity} bed bays")
for room in kb.ward.rooms:
    print(f"  {room.room_id}: {room.capacity} bays, {room.category.name}")
print(f"treatments: {', '.join(sorted(kb.treatments_by_id))}\n")

with tempfile.TemporaryDirectory() as tmp:
    store = DataStore(tmp)
    store.put_ward("example-ward", doc)
    scenario = generate_scenario(
        "demo", "example-ward", kb, n_patients=25, days=7, seed=11, contagion_rate=0.15
    )
    store.create_scenario(scenario)
    print(f"scenario: {len(scenario.patients)} patients arriving over {scenario.horizon_days} days")

    timeline = simulate(scenario, kb)
    print(f"bed-need timeline spans days 1..{timeline.last_day}\n")

    plan = run_plan(store, "demo", PlanConfig(budget_secs=30.0))
    for day_entry in plan.days:
        if day_entry.status != "feasible":
            print(f"day {day_entry.day:2d}: *** {day_entry.status} (skipped, beds kept) ***")
            continue
        alloc = day_entry.allocation
        by_room: dict[str, list[str]] = {}
        for pid, rid in alloc.assignment.items():
            flag = "*" if pid in alloc.moves else ""
            by_room.setdefault(rid, []).append(pid + flag)
        grid = "  ".join(
            f"{room.room_id}[{' '.join(sorted(by_room.get(room.room_id, []))) or '-'}]"
            for room in kb.ward.rooms
        )
        print(f"day {day_entry.day:2d}: {grid}")
    print(f"\ntotal moves: {plan.total_moves} (* marks a moved patient)")
    print(f"infeasible days: {plan.infeasible_days or 'none'}")
    t = plan.timings
    print(f"phases: simulate {t.simulate_secs:.3f}s, encode {t.encode_secs:.3f}s, solve {t.solve_secs:.3f}s")
