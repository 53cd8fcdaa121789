from __future__ import annotations

from pathlib import Path

import pytest

from klevel import exact
from klevel.generate import GenConfig, gen_random

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> exact.Arrangement:
    return exact.validate(exact.Arrangement.loads((FIXTURES / name).read_text()))


@pytest.fixture(scope="session")
def arr5():
    return load_fixture("plane5_immersion.json")


@pytest.fixture(scope="session")
def arr6():
    return load_fixture("plane6_diamond.json")


@pytest.fixture(scope="session")
def arr8():
    return load_fixture("plane8.json")


@pytest.fixture(scope="session")
def arr10():
    return load_fixture("plane10.json")


@pytest.fixture(scope="session")
def arr12():
    return load_fixture("plane12.json")


@pytest.fixture(scope="session")
def small_batch():
    """A handful of seeded instances, n = 6..9."""
    return [gen_random(GenConfig(n, seed=s)) for n, s in [(6, 11), (7, 12), (8, 13), (9, 14)]]


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
