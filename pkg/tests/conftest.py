import math
import time

import pytest

from photon_qsl.harness.config import parse_config
from photon_qsl.harness.sweep import run_sweep
from photon_qsl.spectral import EXPERIMENTAL

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LOG = []


@pytest.fixture
def params():
    return EXPERIMENTAL


@pytest.fixture
def tau():
    return EXPERIMENTAL.window[1]


@pytest.fixture(scope="session")
def fig2_sweep():
    cfg = parse_config(None, ["sweep.variable=xi", "sweep.start=0", "sweep.stop=pi/2",
                              "sweep.points=201"])
    start = time.perf_counter()
    rows = run_sweep(cfg)
    elapsed = time.perf_counter() - start
    return cfg, rows, elapsed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LOG:
        terminalreporter.write_line(line)


HALF_PI = math.pi / 2
