import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wardflow import example_ward_document, load_knowledge
from wardflow.store import DataStore

MINIMAL_WARD = """\
categories: HighMonitoring=0, Intermediate=1, Standard=2
room R1 capacity=2 category=HighMonitoring
treatment surgery-course:
  task surgery duration=1d category=HighMonitoring
  task postsurgery duration=2d category=Standard
  dep surgery -> postsurgery
diagnosis appendicitis -> surgery-course
"""


@pytest.fixture(scope="session")
def example_doc() -> str:
    return example_ward_document()


@pytest.fixture(scope="session")
def example_kb(example_doc):
    return load_knowledge(example_doc, "example-ward")


@pytest.fixture()
def minimal_kb():
    return load_knowledge(MINIMAL_WARD, "mini")


@pytest.fixture()
def store(tmp_path) -> DataStore:
    return DataStore(tmp_path / "data")
