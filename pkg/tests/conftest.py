from pathlib import Path

import pytest

from smcontain.dsl import SourceText, parse_mapping

FIXTURES = Path(__file__).parent / "fixtures"


def load_mapping(name: str):
    return parse_mapping(SourceText.from_path(FIXTURES / name))


@pytest.fixture(scope="session")
def M():
    return load_mapping("M.map")


@pytest.fixture(scope="session")
def Mp():
    return load_mapping("Mp.map")


@pytest.fixture(scope="session")
def Mpp():
    return load_mapping("Mpp.map")


@pytest.fixture(scope="session")
def employee():
    return load_mapping("employee.map")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
