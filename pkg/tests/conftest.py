import os
import random

import pytest

SEED = int(os.environ.get("FLOWCOH_SEED", "20240611"))

from acceptance_log import LINES as ACCEPTANCE_LINES


@pytest.fixture
def rng():
    return random.Random(SEED)


def pytest_report_header(config):
    return f"FLOWCOH_SEED={SEED}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
