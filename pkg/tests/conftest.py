from pathlib import Path

import numpy as np
import pytest

from qpixl._backend import available_backends
from qpixl.cli import run_bench
from qpixl.codec import load_image

DATA = Path(__file__).parent / "data"

_criteria = {}


@pytest.fixture(params=available_backends())
def backend(request):
    """Run a test once per importable kernel backend."""
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20221)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def load_fixture():
    return lambda name: load_image(DATA / name)


@pytest.fixture(scope="session")
def sfwht_timings():
    """Median sfwht wall time (ms) for n = 18..22 on the active backend."""
    return {
        n: ms for n, op, ms in run_bench(18, 22, reps=15) if op == "sfwht"
    }


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    prev = _criteria.get(number, (title, True))
    _criteria[number] = (title, prev[1] and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}")
