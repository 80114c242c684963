"""Command-line entry points mirroring the API: ingest, match, recommend,
evaluate, map, serve."""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path

from . import ingestion
from .evaluation import award_match_lists, feedback_summary, hit_rate_at_k
from .ingestion import CallRecord, ResearcherProfile
from .matching import STRATEGIES, STRATEGY_VECTOR, build_corpus_model, top_k_calls
from .service import CorpusPaths, create_app
from .store import KIND_AWARD, KIND_CALL, KIND_RECOMMENDATION, KIND_USER, Store
from .taxonomy import load_taxonomy, map_text, sample_taxonomy
from .teams import TeamingConfig, recommend_for_call, recommend_for_user


def _load_config(path: str | None) -> TeamingConfig:
    if not path:
        return TeamingConfig()
    return TeamingConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _stored_calls(store: Store) -> list[CallRecord]:
    return [CallRecord.from_dict(r) for r in store.query(KIND_CALL)]


def _stored_users(store: Store) -> list[ResearcherProfile]:
    return [ResearcherProfile.from_dict(r) for r in store.query(KIND_USER)]


def _model_over(calls) -> "object":
    return build_corpus_model([c.synopsis for c in calls])


def cmd_ingest(args) -> int:
    store = Store(args.store)
    reference = date.fromisoformat(args.reference_date) if args.reference_date else date.today()
    calls = ingestion.parse_call_corpus(ingestion.load_call_corpus(args.calls), reference)
    for record in calls.records:
        store.put_entity(KIND_CALL, record.to_dict())
    admitted, funnel = ingestion.parse_researcher_roster(ingestion.load_roster(args.roster))
    for profile in admitted:
        store.put_entity(KIND_USER, profile.to_dict())
    awards = None
    if args.awards:
        awards = ingestion.parse_award_corpus(Path(args.awards))
        for award in awards.records:
            store.put_entity(KIND_AWARD, award.to_dict())
    stats = ingestion.ingestion_report(calls, funnel, awards)
    print(stats.render_text())
    return 0


def cmd_match(args) -> int:
    store = Store(args.store)
    users = {u.username: u for u in _stored_users(store)}
    if args.username not in users:
        print(f"unknown user {args.username}", file=sys.stderr)
        return 1
    calls = _stored_calls(store)
    model = _model_over(calls) if args.strategy == STRATEGY_VECTOR else None
    ranked = top_k_calls(
        users[args.username], calls, model, args.strategy, args.k, args.floor
    )
    print(f"top {args.k} calls for {args.username} ({args.strategy}):")
    for entry in ranked.entries:
        print(f"  {entry.score:>3}  {entry.call_id}")
    if not ranked.entries:
        print("  (none at or above the relevance floor)")
    return 0


def _print_team(team, indent: str = "  ") -> None:
    print(f"{indent}team {team.team_id} (call {team.call_id})")
    print(f"{indent}  lead: {team.lead} (score {team.lead_score})")
    for member in team.members:
        print(f"{indent}  member: {member.user_id} (score {member.score})")
    if team.proposed_budget is not None:
        print(
            f"{indent}  budget: ${team.proposed_budget:,}"
            f" (${team.per_member_allocation:,} per member)"
        )
    for entry in team.report.entries:
        mark = "ok " if entry.satisfied else "NOT"
        print(f"{indent}  [{mark}] {entry.constraint}: {entry.explanation}")


def cmd_recommend(args) -> int:
    store = Store(args.store)
    config = _load_config(args.config)
    calls = _stored_calls(store)
    users = _stored_users(store)
    model = _model_over(calls) if args.strategy == STRATEGY_VECTOR else None
    teams = []
    if args.username:
        lead = next((u for u in users if u.username == args.username), None)
        if lead is None:
            print(f"unknown user {args.username}", file=sys.stderr)
            return 1
        teams = recommend_for_user(lead, calls, users, model, config, args.strategy)
        print(f"{len(teams)} recommendation(s) for {args.username}:")
    elif args.call:
        call = next((c for c in calls if c.call_id == args.call), None)
        if call is None:
            print(f"unknown call {args.call}", file=sys.stderr)
            return 1
        team = recommend_for_call(call, users, model, config, args.strategy)
        teams = [team] if team else []
        print(f"{len(teams)} team(s) for call {args.call}:")
    else:
        print("provide --username or --call", file=sys.stderr)
        return 2
    for team in teams:
        _print_team(team)
        if args.save:
            record = team.to_dict()
            record["responses"] = {}
            record["version"] = 0
            store.put_entity(KIND_RECOMMENDATION, record)
    if args.save:
        print(f"saved {len(teams)} team(s)")
    return 0


def cmd_evaluate(args) -> int:
    store = Store(args.store)
    config = _load_config(args.config)
    users = _stored_users(store)
    awards = [ingestion.AwardRecord.from_dict(r) for r in store.query(KIND_AWARD)]
    if awards:
        model = None
        if args.strategy == STRATEGY_VECTOR:
            model = build_corpus_model([a.synopsis or a.title for a in awards])
        lists = award_match_lists(users, awards, model, args.strategy, args.k)
        report = hit_rate_at_k(lists, awards, args.k)
        print(report.render_text())
    else:
        print("no awards in store; skipping hit@k")
    events = store.replay_events()
    summary = feedback_summary(events, args.threshold)
    print(
        f"feedback: {summary.well_matched} of {summary.total} ratings at or above "
        f"{summary.threshold}"
    )
    for user, calls_below in summary.below_threshold_by_user:
        print(f"  follow up with {user}: {', '.join(calls_below)}")
    return 0


def cmd_map(args) -> int:
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else sample_taxonomy()
    text = sys.stdin.read()
    results = map_text(text, args.threshold, taxonomy)
    print(f"{'code':<10}{'score':>6}  term")
    for code, term, score in results:
        print(f"{code:<10}{score:>6}  {term}")
    if not results:
        print(f"(no codes at threshold {args.threshold})")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    store = Store(args.store)
    config = _load_config(args.config)
    corpus = CorpusPaths(
        calls=Path(args.calls) if args.calls else None,
        roster=Path(args.roster) if args.roster else None,
        awards=Path(args.awards) if args.awards else None,
    )
    static_dir = Path(args.static) if args.static else None
    clock = date.today
    if args.reference_date:
        pinned = date.fromisoformat(args.reference_date)
        clock = lambda: pinned  # noqa: E731
    app = create_app(store, config, clock=clock, corpus=corpus, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teamrec")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse corpora into a store")
    p.add_argument("--calls", required=True)
    p.add_argument("--roster", required=True)
    p.add_argument("--awards")
    p.add_argument("--store", required=True)
    p.add_argument("--reference-date", help="YYYY-MM-DD for is_open (default: today)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("match", help="rank calls for one user")
    p.add_argument("--store", required=True)
    p.add_argument("--username", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default=STRATEGY_VECTOR)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--floor", type=int, default=40)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("recommend", help="build teams for a user or a call")
    p.add_argument("--store", required=True)
    p.add_argument("--username")
    p.add_argument("--call")
    p.add_argument("--strategy", choices=STRATEGIES, default=STRATEGY_VECTOR)
    p.add_argument("--config", help="JSON file of teaming tunables")
    p.add_argument("--save", action="store_true", help="persist teams to the store")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("evaluate", help="hit@k over awards plus feedback summary")
    p.add_argument("--store", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--strategy", choices=STRATEGIES, default=STRATEGY_VECTOR)
    p.add_argument("--threshold", type=int, default=7)
    p.add_argument("--config")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("map", help="map stdin text to taxonomy codes")
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--taxonomy", help="code<TAB>term file (default: bundled sample)")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--calls")
    p.add_argument("--roster")
    p.add_argument("--awards")
    p.add_argument("--config")
    p.add_argument("--static", help="directory of built webapp assets")
    p.add_argument(
        "--reference-date",
        help="pin the service clock (YYYY-MM-DD) for deadline expiry; default: today",
    )
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
