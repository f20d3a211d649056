import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eisenpole.rootdata import build_root_datum


@lru_cache(maxsize=None)
def datum(label):
    return build_root_datum(label)


@pytest.fixture
def g2():
    return datum("G2")


@pytest.fixture
def f4():
    return datum("F4")


@lru_cache(maxsize=None)
def report(label, i):
    from eisenpole.poles import pole_report
    return pole_report(datum(label), i)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
