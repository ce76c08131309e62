from pathlib import Path

import pytest

DEMO = Path(__file__).resolve().parent.parent / "demo"


@pytest.fixture
def demo_dir() -> Path:
    return DEMO


@pytest.fixture
def gcc_spec() -> str:
    return str(DEMO / "gcc.json")


@pytest.fixture
def conflict_spec() -> str:
    return str(DEMO / "conflict.json")


@pytest.fixture
def bug_spec() -> str:
    return str(DEMO / "bug.json")
