"""Walk through corpus ingestion: calls, the researcher roster, and awards.

Prints the extraction-coverage table (how many records yielded a title,
deadline, budget, ...) and the roster funnel from raw rows down to profiles
admitted to matching.
"""

from datetime import date
from pathlib import Path

from teamrec import ingestion

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
REFERENCE_DATE = date(2026, 1, 15)


def main() -> None:
    raws = ingestion.load_call_corpus(FIXTURES / "calls.jsonl")
    calls = ingestion.parse_call_corpus(raws, REFERENCE_DATE)
    print(f"parsed {len(calls.records)} calls ({len(calls.rejected)} rejected)\n")

    sample = calls.records[0]
    print(f"first call: {sample.call_id} / {sample.title}")
    print(f"  agency   {sample.agency_id}")
    print(f"  deadlines {[d.isoformat() for d in sample.deadlines]} (open={sample.is_open})")
    print(f"  budget   ${sample.budget_total:,}\n")

    admitted, funnel = ingestion.parse_researcher_roster(
        ingestion.load_roster(FIXTURES / "roster.tsv")
    )
    awards = ingestion.parse_award_corpus(FIXTURES / "awards.xml")
    print(f"roster admitted {len(admitted)} researchers; awards {len(awards.records)}\n")

    stats = ingestion.ingestion_report(calls, funnel, awards)
    print(stats.render_text())


if __name__ == "__main__":
    main()
