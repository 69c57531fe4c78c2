import math

import pytest

from strainhole.cli import bundled_config_text
from strainhole.config import parse_config
from strainhole.report import Scenario

GAMMA = 2 * math.pi * 122


@pytest.fixture(scope="session")
def example_cfg():
    return parse_config(bundled_config_text())


@pytest.fixture(scope="session")
def example(example_cfg):
    return Scenario.from_config(example_cfg)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
