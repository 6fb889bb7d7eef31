import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lpdofactor import Session, parse_operator, parse_type  # noqa: E402

import oracles  # noqa: E402


@pytest.fixture
def s2():
    return Session(2)


@pytest.fixture
def laplace_session():
    s = Session(2)
    s.functions_declared("a", "b", "c")
    return s


@pytest.fixture
def order3_session():
    s = Session(2)
    s.functions_declared(*oracles.ORDER3_NAMES)
    return s


@pytest.fixture
def family_session():
    s = Session(2)
    s.declare("f1", "y")
    return s


@pytest.fixture
def op():
    def build(text, session):
        return parse_operator(text, session)

    return build


@pytest.fixture
def typ():
    def build(text, session):
        return parse_type(text, session)

    return build


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
