import random
import time

import pytest
from hypothesis import settings

settings.register_profile("phk", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("phk")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240601,
                     help="seed for the randomized (non-hypothesis) tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


_START = {}


def pytest_sessionstart(session):
    _START["t"] = time.time()


def pytest_terminal_summary(terminalreporter):
    dt = time.time() - _START.get("t", time.time())
    ok = dt < 600
    terminalreporter.write_line(
        f"acceptance 10 (suite time): {'PASS' if ok else 'FAIL'} - {dt:.0f}s for this run (limit 600s)")
