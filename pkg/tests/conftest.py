import pytest

from cdwsd.corpus import parse_semcor
from cdwsd.taxonomy import load_taxonomy

from helpers import DATA

NOUNS = ["jury", "administration", "operation", "Police_Department", "prison_farm"]


@pytest.fixture(scope="session")
def ex_tax():
    with open(DATA / "example_taxonomy.tsv", "rb") as fh:
        return load_taxonomy(fh)


@pytest.fixture(scope="session")
def ex_gold():
    with open(DATA / "example_gold.sem", "rb") as fh:
        return parse_semcor(fh, source_id="example_gold")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
