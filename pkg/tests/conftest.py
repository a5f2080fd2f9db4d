from __future__ import annotations

from pathlib import Path

import pytest

from hnncert.textio import load_presentation
from hnncert.zmaps import find_zmap, normalize_stable_letter

FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE_NAMES = sorted(p.stem for p in FIXTURES.glob("*.txt"))

ACCEPTANCE_LINES: list[str] = []


def load(name: str):
    return load_presentation(str(FIXTURES / f"{name}.txt"))


def normalized(name: str):
    p = load(name)
    eps = find_zmap(p)
    return None if eps is None else normalize_stable_letter(p, eps)


@pytest.fixture
def bs12():
    return load("bs12")


@pytest.fixture
def f2():
    return load("f2")


@pytest.fixture
def genus2():
    return load("genus2")


@pytest.fixture
def trefoil():
    return load("trefoil")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
