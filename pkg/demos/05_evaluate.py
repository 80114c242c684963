"""Retrospective evaluation: do researchers' actual awards show up in their
top-k recommendations over the award corpus?  Also aggregates Likert-style
feedback ratings.
"""

from datetime import datetime
from pathlib import Path

from teamrec import ingestion
from teamrec.evaluation import (
    FeedbackEvent,
    award_match_lists,
    feedback_summary,
    hit_rate_at_k,
)
from teamrec.matching import build_corpus_model

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> None:
    profiles, _ = ingestion.parse_researcher_roster(
        ingestion.load_roster(FIXTURES / "roster.tsv")
    )
    awards = list(ingestion.parse_award_corpus(FIXTURES / "awards.xml").records)
    model = build_corpus_model([a.synopsis for a in awards])
    lists = award_match_lists(profiles, awards, model, "vector", 10)
    report = hit_rate_at_k(lists, awards, 10)
    print(report.render_text())

    stamp = datetime(2026, 1, 20, 10, 0)
    events = [
        FeedbackEvent("chen.wei", "NSF-26-BRAIN", 9, "T1", stamp),
        FeedbackEvent("chen.wei", "NIH-26-GENM", 7, "T1", stamp),
        FeedbackEvent("hiro.tanaka", "NSF-26-SEC", 10, "T1", stamp),
        FeedbackEvent("hiro.tanaka", "NSF-26-PRIV", 5, "T1", stamp),
        FeedbackEvent("amara.okafor", "NSF-26-SCC", 8, "T1", stamp),
    ]
    summary = feedback_summary(events, threshold=7)
    print(
        f"\nfeedback: {summary.well_matched} of {summary.total} ratings at or above "
        f"{summary.threshold}"
    )
    for user, below in summary.below_threshold_by_user:
        print(f"  follow up with {user}: {', '.join(below)}")


if __name__ == "__main__":
    main()
