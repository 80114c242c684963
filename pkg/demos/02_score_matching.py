"""Compare the two matching strategies on the bundled corpus.

Shows the fuzzy and corpus-vector scores for one researcher profile against
one program synopsis (the embedding-style score should rank this pair
higher), then each researcher's top calls.
"""

from datetime import date
from pathlib import Path

from teamrec import ingestion, matching

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
REFERENCE_DATE = date(2026, 1, 15)


def main() -> None:
    calls = ingestion.parse_call_corpus(
        ingestion.load_call_corpus(FIXTURES / "calls.jsonl"), REFERENCE_DATE
    ).records
    profiles, _ = ingestion.parse_researcher_roster(
        ingestion.load_roster(FIXTURES / "roster.tsv")
    )
    model = matching.build_corpus_model([c.synopsis for c in calls])

    amara = next(p for p in profiles if p.username == "amara.okafor")
    aics = next(c for c in calls if c.call_id == "NSF-AICS-001")
    print(f"profile: {amara.display_name}: {list(amara.skills.displays())}")
    print(f"call:    {aics.title}\n")
    fuzzy = matching.fuzzy_match(aics.synopsis, amara.skills)
    vector = matching.vector_match(aics.synopsis, amara.skills, model)
    print(f"fuzzy score  {fuzzy.score:>3}   (token-set overlap)")
    print(f"vector score {vector.score:>3}   (tf-idf cosine; ranks this pair higher)\n")

    print("top calls per researcher (vector, floor 25):")
    for profile in profiles:
        ranked = matching.top_k_calls(profile, calls, model, "vector", 3, 25)
        row = ", ".join(f"{e.call_id}={e.score}" for e in ranked.entries) or "-"
        print(f"  {profile.username:<16} {row}")


if __name__ == "__main__":
    main()
