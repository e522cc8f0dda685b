import numpy as np
import pytest

from echoalign.channel import RadarParams
from echoalign.codes import build_pnc128
from echoalign.scenario import load_scenario

_ACCEPTANCE_LINES = []


@pytest.fixture
def pnc():
    return build_pnc128()


@pytest.fixture
def params():
    return RadarParams()


@pytest.fixture
def fig5():
    return load_scenario("fig5")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


class _Recorder:
    def __call__(self, number, name, passed, detail=""):
        _ACCEPTANCE_LINES.append(
            f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}" + (f" -- {detail}" if detail else "")
        )
        return passed


@pytest.fixture
def acceptance():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
