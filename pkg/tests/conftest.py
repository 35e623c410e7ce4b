import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from apermute.cycle_sets import materialize  # noqa: E402

# Rules used across suites; "not:1" forbids fixed points.
TEST_RULES = ["1", "2", "3", "1,2", "2,3", "1,3", "all", "not:1", "mult:2", "min:2"]


@pytest.fixture(params=TEST_RULES)
def rule(request):
    return request.param


def allowed(rule_text, bound=64):
    A = materialize(rule_text, bound)
    return lambda L: L in A


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
