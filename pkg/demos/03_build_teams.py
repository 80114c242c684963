"""Greedy team building with constraint reports and what-if changes.

Builds user-led teams over the bundled corpus, prints each team's
per-constraint report, then asks what would happen if a member were removed
or an outsider added.
"""

from datetime import date
from pathlib import Path

from teamrec import ingestion, matching, teams

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
REFERENCE_DATE = date(2026, 1, 15)
CONFIG = teams.TeamingConfig(relevance_floor=25)


def show_team(team: teams.TeamRecommendation) -> None:
    print(f"team {team.team_id}")
    print(f"  lead    {team.lead} (score {team.lead_score})")
    for member in team.members:
        print(f"  member  {member.user_id} (score {member.score})")
    if team.proposed_budget is not None:
        print(f"  budget  ${team.proposed_budget:,} -> ${team.per_member_allocation:,} each")
    for entry in team.report.entries:
        mark = "ok" if entry.satisfied else "VIOLATED"
        print(f"  [{mark:>8}] {entry.constraint}: {entry.explanation}")


def main() -> None:
    calls = ingestion.parse_call_corpus(
        ingestion.load_call_corpus(FIXTURES / "calls.jsonl"), REFERENCE_DATE
    ).records
    profiles, _ = ingestion.parse_researcher_roster(
        ingestion.load_roster(FIXTURES / "roster.tsv")
    )
    model = matching.build_corpus_model([c.synopsis for c in calls])
    by_id = {p.user_id: p for p in profiles}

    lead = by_id["chen.wei"]
    recommendations = teams.recommend_for_user(lead, calls, profiles, model, CONFIG)
    print(f"{len(recommendations)} recommendation(s) for {lead.username}\n")
    for team in recommendations:
        show_team(team)
        print()

    if recommendations:
        team = recommendations[0]
        victim = team.members[0].user_id
        print(f"what if we removed {victim}?")
        report = teams.explain_change(team, teams.RemoveMember(victim), by_id, CONFIG)
        for entry in report.entries:
            mark = "ok" if entry.satisfied else "VIOLATED"
            print(f"  [{mark:>8}] {entry.constraint}: {entry.explanation}")

        print("\nwhat if we added ingrid.berg?")
        report = teams.explain_change(
            team, teams.AddMember("ingrid.berg"), by_id, CONFIG
        )
        for entry in report.entries:
            mark = "ok" if entry.satisfied else "VIOLATED"
            print(f"  [{mark:>8}] {entry.constraint}: {entry.explanation}")

    print("\ncall-centric recommendation for NSF-26-SEC:")
    sec = next(c for c in calls if c.call_id == "NSF-26-SEC")
    team = teams.recommend_for_call(sec, profiles, model, CONFIG)
    if team:
        show_team(team)


if __name__ == "__main__":
    main()
