import datetime as dt
import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from histograph import link_citations, node_indicators, parse_export  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name, **kw):
    return parse_export((FIXTURES / name).read_text(encoding="utf-8"), **kw)


@pytest.fixture(scope="session")
def alert92():
    return load_fixture("alert92.txt", query_label="Barcelona 92 pneumococcal alert",
                        download_date=dt.date(2005, 2, 11))


@pytest.fixture(scope="session")
def alert92_graph(alert92):
    return link_citations(alert92)


@pytest.fixture(scope="session")
def alert92_metrics(alert92, alert92_graph):
    return node_indicators(alert92, alert92_graph, ref_year=1992)


@pytest.fixture(scope="session")
def management_science():
    return load_fixture("management_science.txt", query_label="SO=Management Science")


@pytest.fixture(scope="session")
def barbacid():
    return load_fixture("barbacid.txt", query_label="Barbacid 1981-1986")


@pytest.fixture(scope="session")
def muscle():
    from fixtures.muscle_fiber import collections
    return collections()


# acceptance verdicts, filled in by test_acceptance and echoed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
