from __future__ import annotations

import pytest

from qmatroids.scenarios import SCENARIOS, run_scenario

SLOW = {"dsnonrepr1"}


@pytest.mark.parametrize("name", [pytest.param(n, marks=pytest.mark.slow) if n in SLOW else n
                                  for n in SCENARIOS])
def test_scenario_passes(name):
    res = run_scenario(name, seed=1)
    assert res.passed, res.summary()
    assert res.checks


def test_scenario_artifacts_deterministic():
    a = run_scenario("dsnonrepr3").artifacts
    b = run_scenario("dsnonrepr3").artifacts
    assert a == b and a
