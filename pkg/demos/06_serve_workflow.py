"""Drive the HTTP API end to end, in process: admin ingest and reindex, then
browse recommendations and walk one team through notify -> accept -> confirm.

Uses the test client so no port is opened; `teamrec serve` runs the same app
over uvicorn.
"""

import tempfile
from datetime import date, datetime
from pathlib import Path

from fastapi.testclient import TestClient

from teamrec.service import CorpusPaths, create_app
from teamrec.store import Store
from teamrec.teams import TeamingConfig

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        store = Store(Path(tmp) / "store")
        app = create_app(
            store,
            TeamingConfig(relevance_floor=25),
            clock=lambda: date(2026, 1, 15),
            now=lambda: datetime(2026, 1, 15, 12, 0),
            corpus=CorpusPaths(
                calls=FIXTURES / "calls.jsonl",
                roster=FIXTURES / "roster.tsv",
                awards=FIXTURES / "awards.xml",
            ),
        )
        client = TestClient(app)

        stats = client.post("/admin/ingest", headers={"X-Role": "admin"}).json()
        print("ingested; title coverage:", stats["fields"]["title"]["percent"])
        result = client.post("/admin/reindex", headers={"X-Role": "admin"}).json()
        print(f"reindexed: {result['teams']} teams over {result['calls']} calls\n")

        page = client.get("/recommendations/user/hiro.tanaka").json()
        print(f"recommendations for hiro.tanaka (page 1 of {page['total_pages']}):")
        for rec in page["recommendations"]:
            members = ", ".join(m["display_name"] for m in rec["members"])
            print(f"  {rec['call']['title']} with {members}")
            print(f"    state={rec['state']} budget={rec['proposed_budget']}")

        team = page["recommendations"][0]
        team_id = team["team_id"]
        print(f"\nnotifying {team_id}")
        print("  ->", client.post(f"/teams/{team_id}/notify").json()["state"])
        for member in team["members"]:
            body = client.post(
                f"/teams/{team_id}/respond",
                json={"username": member["user_id"], "action": "accept"},
            ).json()
            print(f"  {member['user_id']} accepts -> {body['state']}")

        rating = client.post(
            "/feedback",
            json={"username": "hiro.tanaka", "call_id": team["call_id"], "rating": 9},
        )
        print(f"\nfeedback stored (sequence {rating.json()['sequence']})")


if __name__ == "__main__":
    main()
