import json
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ORACLES = os.path.join(os.path.dirname(__file__), "oracles", "frozen.json")
_REPORT = []

@pytest.fixture(scope="session")
def frozen():
    with open(_ORACLES) as fh:
        return json.load(fh)

@pytest.fixture
def rng():
    return np.random.default_rng(20240601)

@pytest.fixture(scope="session")
def criterion_report():
    """Collects one line per acceptance criterion; printed after the run."""

    def record(number, passed, detail):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        _REPORT.append((number, line))
        print(line)
        return passed

    return record

def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_REPORT):
        terminalreporter.write_line(line)
