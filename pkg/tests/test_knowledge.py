import itertools

import pytest

from wardflow.knowledge import (
    KnowledgeParseError,
    KnowledgeValidationError,
    UnknownDiagnosisError,
    category_leq,
    dump_knowledge,
    load_knowledge,
    treatment_for,
)

from conftest import MINIMAL_WARD


def test_minimal_document_loads(minimal_kb):
    assert len(minimal_kb.ward.rooms) == 1
    assert minimal_kb.ward.rooms[0].capacity == 2
    assert minimal_kb.ward.rooms[0].category.name == "HighMonitoring"
    assert len(minimal_kb.treatments_by_id) == 1
    treatment = minimal_kb.treatments_by_id["surgery-course"]
    assert {t.task_id for t in treatment.tasks} == {"surgery", "postsurgery"}
    assert treatment.dependencies == (("surgery", "postsurgery"),)


def test_dependency_cycle_reports_the_cycle():
    doc = """\
categories: Standard=0
room R1 capacity=1 category=Standard
treatment looped:
  task a duration=1d category=Standard
  task b duration=1d category=Standard
  dep a -> b
  dep b -> a
diagnosis x -> looped
"""
    with pytest.raises(KnowledgeValidationError, match=r"cyclic.*a -> b -> a"):
        load_knowledge(doc)


def test_example_ward_mirrors_expected_layout(example_kb):
    # watch-room neighbours carry the strictest category, the rest are
    # intermediate/standard with mixed capacities
    by_cat = {}
    for room in example_kb.ward.rooms:
        by_cat.setdefault(room.category.name, []).append(room)
    assert set(by_cat) == {"HighMonitoring", "Intermediate", "Standard"}
    assert len(by_cat["HighMonitoring"]) >= 1
    assert len({r.capacity for r in example_kb.ward.rooms}) > 1
    assert [c.name for c in example_kb.categories] == [
        "HighMonitoring",
        "Intermediate",
        "Standard",
    ]
    assert [c.level for c in example_kb.categories] == [0, 1, 2]


def test_treatment_lookup(minimal_kb):
    treatment = treatment_for(minimal_kb, "appendicitis")
    assert treatment.treatment_id == "surgery-course"
    with pytest.raises(UnknownDiagnosisError, match="unknown-dx"):
        treatment_for(minimal_kb, "unknown-dx")


def test_surgery_precedes_post_surgery(example_kb):
    treatment = treatment_for(example_kb, "appendicitis")
    order = treatment.topological_order()
    assert order.index("surgery") < order.index("post-surgery")


def test_every_treatment_has_a_topological_order(example_kb):
    for treatment in example_kb.treatments_by_id.values():
        order = treatment.topological_order()
        assert sorted(order) == sorted(t.task_id for t in treatment.tasks)
        seen = set()
        for task in order:
            assert treatment.predecessors_of(task) <= seen
            seen.add(task)


def test_category_order_examples(example_kb):
    high = example_kb.category("HighMonitoring")
    mid = example_kb.category("Intermediate")
    std = example_kb.category("Standard")
    assert category_leq(high, std)
    assert not category_leq(std, mid)
    assert category_leq(mid, mid)


def test_category_leq_is_a_total_order(example_kb):
    cats = example_kb.categories
    for a in cats:
        assert category_leq(a, a)
    for a, b in itertools.permutations(cats, 2):
        assert category_leq(a, b) != category_leq(b, a)  # antisymmetric + total
    for a, b, c in itertools.product(cats, repeat=3):
        if category_leq(a, b) and category_leq(b, c):
            assert category_leq(a, c)


def test_round_trip(example_kb, example_doc):
    assert load_knowledge(dump_knowledge(example_kb), "example-ward") == example_kb
    # and the original with comments parses to the same content
    assert load_knowledge(example_doc, "example-ward") == example_kb


@pytest.mark.parametrize(
    "mutation, error, match",
    [
        ("room R1 capicity=1 category=Standard", KnowledgeParseError, "room"),
        ("floor F1 size=2", KnowledgeParseError, "unknown key 'floor'"),
        ("room R1 capacity=1 category=Luxury", KnowledgeValidationError, "Luxury"),
        ("dep a -> b", KnowledgeParseError, "outside a treatment"),
    ],
)
def test_strict_parsing(mutation, error, match):
    doc = "categories: Standard=0\n" + mutation + "\n"
    with pytest.raises(error, match=match):
        load_knowledge(doc)


def test_duplicate_room_id_rejected():
    doc = (
        "categories: Standard=0\n"
        "room R1 capacity=1 category=Standard\n"
        "room R1 capacity=2 category=Standard\n"
    )
    with pytest.raises(KnowledgeValidationError, match="duplicate room id 'R1'"):
        load_knowledge(doc)


def test_duplicate_category_level_rejected():
    with pytest.raises(KnowledgeValidationError, match="level 1 used twice"):
        load_knowledge("categories: A=1, B=1\nroom R1 capacity=1 category=A\n")


def test_dependency_on_unknown_task_rejected():
    doc = (
        "categories: Standard=0\n"
        "room R1 capacity=1 category=Standard\n"
        "treatment t:\n"
        "  task a duration=1d category=Standard\n"
        "  dep a -> ghost\n"
    )
    with pytest.raises(KnowledgeValidationError, match="ghost"):
        load_knowledge(doc)


def test_diagnosis_must_map_to_known_treatment():
    doc = MINIMAL_WARD + "diagnosis flu -> nonexistent\n"
    with pytest.raises(KnowledgeValidationError, match="nonexistent"):
        load_knowledge(doc)


def test_empty_treatment_rejected():
    doc = (
        "categories: Standard=0\n"
        "room R1 capacity=1 category=Standard\n"
        "treatment hollow:\n"
        "diagnosis x -> hollow\n"
    )
    with pytest.raises(KnowledgeValidationError, match="hollow"):
        load_knowledge(doc)
