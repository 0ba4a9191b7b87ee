import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from uavtilt.config import Scenario  # noqa: E402
from uavtilt.optimize import GaParams, LocalSearchParams, PsoParams, TiltProblem  # noqa: E402
from verdicts import VERDICTS  # noqa: E402

def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[key])


@pytest.fixture(scope="session")
def scenario():
    return Scenario()


@pytest.fixture(scope="session")
def small_scenario():
    """Default physics with tiny optimizer budgets."""
    return Scenario(
        ga=GaParams(population=12, generations=4),
        pso=PsoParams(swarm=12, iterations=4),
        local_search=LocalSearchParams(max_iters=3),
    )


@pytest.fixture(scope="session")
def problem500(scenario):
    return TiltProblem.from_scenario(scenario)


@pytest.fixture(scope="session")
def toy_problem(scenario):
    return TiltProblem.from_scenario(scenario, sites=[0, 1, 2], quantum=5.0)
