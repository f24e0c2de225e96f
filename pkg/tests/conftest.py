import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
REPO = TESTS.parent
DATA = REPO / "data" / "tmf_chart.json"

sys.path.insert(0, str(TESTS))

from les_deduce import chartdata  # noqa: E402
from les_deduce.rules import saturate  # noqa: E402


@pytest.fixture(scope="session")
def chart():
    return chartdata.load(DATA)


@pytest.fixture(scope="session")
def store(chart):
    return saturate(chart)


@pytest.fixture(scope="session")
def chart_document(chart):
    return chartdata.to_document(chart)
