from pathlib import Path

import pytest

from gnta.parser import parse

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return parse((FIXTURES / name).read_text(), str(FIXTURES / name)).program


@pytest.fixture
def ex1():
    return load("example1.lasso")


@pytest.fixture
def ex2():
    return load("example2.lasso")


@pytest.fixture
def ex3():
    return load("example3.lasso")


@pytest.fixture
def halving():
    return load("halving.lasso")


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = "criterion %d: %s  %s" % (number, "PASS" if passed else "FAIL", detail)
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
