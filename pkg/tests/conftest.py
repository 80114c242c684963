from __future__ import annotations

from datetime import date
from pathlib import Path

import pytest

from teamrec import ingestion, matching

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
REFERENCE_DATE = date(2026, 1, 15)


@pytest.fixture(scope="session")
def call_corpus() -> ingestion.CallCorpusResult:
    raws = ingestion.load_call_corpus(FIXTURES / "calls.jsonl")
    return ingestion.parse_call_corpus(raws, REFERENCE_DATE)


@pytest.fixture(scope="session")
def calls(call_corpus):
    return list(call_corpus.records)


@pytest.fixture(scope="session")
def roster():
    return ingestion.parse_researcher_roster(ingestion.load_roster(FIXTURES / "roster.tsv"))


@pytest.fixture(scope="session")
def profiles(roster):
    return roster[0]


@pytest.fixture(scope="session")
def funnel(roster):
    return roster[1]


@pytest.fixture(scope="session")
def corpus_model(calls):
    return matching.build_corpus_model([c.synopsis for c in calls])


@pytest.fixture(scope="session")
def award_corpus():
    return ingestion.parse_award_corpus(FIXTURES / "awards.xml")
