import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import acceptance_log

settings.register_profile(
    "convtail",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("convtail")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(987654321)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_log.RESULTS:
        terminalreporter.section("acceptance criteria")
        for name, ok, detail in acceptance_log.RESULTS:
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
