import sys
from pathlib import Path

import pytest

import disclim

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdicts after capture is torn down.

    Default capture redirects file descriptor 1, so lines printed while the
    gate tests run never reach the console on success; the terminal reporter
    is the one channel that always does.
    """
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "VERDICT_LINES", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)


def fixture_bytes(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


def fixture_table(name: str) -> disclim.RawTable:
    return disclim.parse_delimited(fixture_bytes(name), source_path=name)


@pytest.fixture(scope="session")
def bundled() -> disclim.Corpus:
    return disclim.load_bundled_corpus()


@pytest.fixture
def region_table() -> disclim.RawTable:
    return fixture_table("region_sample.csv")


@pytest.fixture
def type_table() -> disclim.RawTable:
    return fixture_table("type_sample.csv")


@pytest.fixture
def anomaly_table() -> disclim.RawTable:
    return fixture_table("anomaly_sample.csv")


@pytest.fixture
def micro_corpus(region_table, type_table, anomaly_table) -> disclim.Corpus:
    return disclim.build_corpus([region_table, type_table, anomaly_table])
