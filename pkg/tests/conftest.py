"""Shared test configuration.

The hypothesis profile is derandomized so the whole suite is reproducible
run to run; numerical tolerances in the property tests assume bounded,
non-adversarial inputs, which the strategies below guarantee.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(7)


# The acceptance tests append their criterion lines here; echoing them in the
# terminal summary keeps them visible even for passing tests, whose captured
# stdout pytest would otherwise swallow.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
