from __future__ import annotations

from contextlib import nullcontext

import pytest

from klevel import harness

from .conftest import load_fixture
from .mutations import MUTATIONS, mutated

FIXTURE_SET = ("plane6_diamond.json", "plane8.json", "plane10.json")


def failing_checks(name=None):
    failed = set()
    with mutated(name) if name else nullcontext():
        for fx in FIXTURE_SET:
            rep = harness.verify_all(load_fixture(fx))
            failed |= {r.check for r in rep.failures()}
    return failed


def test_unmutated_fixture_set_is_clean():
    assert failing_checks() == set()


@pytest.mark.parametrize("name", sorted(MUTATIONS))
def test_mutation_is_caught(name):
    assert failing_checks(name), f"mutation {name} went unnoticed"
