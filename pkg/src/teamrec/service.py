"""HTTP API: data retrieval, paginated recommendations, feedback capture,
and the team-confirmation workflow.

Every endpoint exchanges the documented record serializations; error bodies
are machine-readable ``{"code": ..., "message": ...}``.  Authentication is a
deliberate simplification: a role header (``X-Role: participant|admin``)
gates the admin endpoints, nothing more.  Notifications are outbox records
in the store, not emails.  GET endpoints never mutate state; workflow
transitions are check-and-set through a process-wide write lock.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import ingestion
from .evaluation import FeedbackEvent
from .ingestion import CallRecord, ResearcherProfile
from .matching import STRATEGY_VECTOR, build_corpus_model
from .store import (
    KIND_AWARD,
    KIND_CALL,
    KIND_NOTIFICATION,
    KIND_RECOMMENDATION,
    KIND_USER,
    Store,
)
from .teams import (
    AddMember,
    IllegalChange,
    RemoveMember,
    SwapMember,
    TeamingConfig,
    UnknownUser,
    explain_change,
    recommend_for_user,
    TeamRecommendation,
)
from .workflow import (
    TERMINAL_STATES,
    DuplicateResponse,
    IllegalTransition,
    NotAMember,
    TeamWorkflow,
    WorkflowState,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass(frozen=True)
class CorpusPaths:
    """Where the admin ingest endpoint reads its corpora from."""

    calls: Path | None = None
    roster: Path | None = None
    awards: Path | None = None


class RespondBody(BaseModel):
    username: str
    action: Literal["accept", "decline"]


class FeedbackBody(BaseModel):
    username: str
    call_id: str
    rating: int
    period_id: str = ""


class ExplainBody(BaseModel):
    action: Literal["add", "remove", "swap"]
    user_id: str
    in_user_id: str | None = None


def _workflow_of(record: dict) -> TeamWorkflow:
    return TeamWorkflow(
        team_id=record["team_id"],
        member_ids=tuple(m["user_id"] for m in record["members"]),
        state=WorkflowState(record["state"]),
        responses=tuple(record.get("responses", {}).items()),
        version=int(record.get("version", 0)),
    )


def _store_workflow(store: Store, record: dict, workflow: TeamWorkflow) -> dict:
    record = dict(record)
    record["state"] = workflow.state.value
    record["responses"] = workflow.responses_map
    record["version"] = workflow.version
    store.put_entity(KIND_RECOMMENDATION, record)
    return record


def create_app(
    store: Store,
    config: TeamingConfig | None = None,
    *,
    clock=date.today,
    now=datetime.now,
    corpus: CorpusPaths | None = None,
    static_dir: Path | str | None = None,
) -> FastAPI:
    """Build the API around a store.

    ``clock``/``now`` are injectable so deadline expiry and feedback
    timestamps are testable; ``corpus`` configures what the admin ingest
    endpoint reads.
    """
    config = config or TeamingConfig()
    app = FastAPI(title="teamrec", docs_url=None, redoc_url=None)
    write_lock = threading.Lock()
    state: dict = {"model": None}

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422, content={"code": "invalid_request", "message": str(exc.errors())}
        )

    def require_admin(role: str | None) -> None:
        if role != "admin":
            raise ApiError(403, "forbidden", "requires X-Role: admin")

    def get_team_or_404(team_id: str) -> dict:
        record = store.get_entity(KIND_RECOMMENDATION, team_id)
        if record is None:
            raise ApiError(404, "team_not_found", f"no team {team_id}")
        return record

    def call_deadline_passed(record: dict) -> bool:
        call = store.get_entity(KIND_CALL, record["call_id"])
        if not call or not call.get("deadlines"):
            return False
        latest = max(date.fromisoformat(d) for d in call["deadlines"])
        return latest < clock()

    def expire_if_due(record: dict) -> dict:
        """Lazily expire a team whose call deadline has passed."""
        workflow = _workflow_of(record)
        if workflow.state in TERMINAL_STATES:
            return record
        if call_deadline_passed(record):
            return _store_workflow(store, record, workflow.expire())
        return record

    def display_name(user_id: str) -> str:
        user = store.get_entity(KIND_USER, user_id)
        return user.get("display_name", user_id) if user else user_id

    def team_payload(record: dict) -> dict:
        """The detail-pane payload: team plus call context and member names."""
        call = store.get_entity(KIND_CALL, record["call_id"]) or {}
        deadlines = [date.fromisoformat(d) for d in call.get("deadlines", [])]
        future = sorted(d for d in deadlines if d >= clock())
        return {
            "team_id": record["team_id"],
            "call_id": record["call_id"],
            "call": {
                "call_id": call.get("call_id", record["call_id"]),
                "agency_id": call.get("agency_id", ""),
                "title": call.get("title"),
                "url": call.get("url", ""),
                "deadline": future[0].isoformat() if future else None,
                "deadlines": call.get("deadlines", []),
                "is_open": call.get("is_open", False),
            },
            "lead": {
                "user_id": record["lead"],
                "display_name": display_name(record["lead"]),
                "score": record.get("lead_score", 0),
            },
            "members": [
                {
                    "user_id": m["user_id"],
                    "display_name": display_name(m["user_id"]),
                    "score": m["score"],
                }
                for m in record["members"]
            ],
            "proposed_budget": record.get("proposed_budget"),
            "per_member_allocation": record.get("per_member_allocation"),
            "report": record["report"],
            "state": record["state"],
            "responses": record.get("responses", {}),
        }

    # -- data retrieval ------------------------------------------------------

    @app.get("/proposals")
    def proposals(request: Request):
        """Filter calls by agency_id and/or proposal_id."""
        allowed = {"agency_id", "proposal_id"}
        unknown = set(request.query_params) - allowed
        if unknown:
            raise ApiError(400, "unknown_filter", f"unknown filter keys: {sorted(unknown)}")
        filters = {}
        if "agency_id" in request.query_params:
            filters["agency_id"] = request.query_params["agency_id"]
        if "proposal_id" in request.query_params:
            filters["call_id"] = request.query_params["proposal_id"]
        return store.query(KIND_CALL, **filters)

    @app.get("/users/{username}")
    def get_user(username: str):
        record = store.get_entity(KIND_USER, username)
        if record is None:
            raise ApiError(404, "user_not_found", f"no user {username}")
        return record

    @app.get("/awards/{award_number}")
    def get_award(award_number: str):
        record = store.get_entity(KIND_AWARD, award_number)
        if record is None:
            raise ApiError(404, "award_not_found", f"no award {award_number}")
        return record

    @app.get("/config")
    def get_config():
        return config.to_dict()

    # -- recommendations -----------------------------------------------------

    @app.get("/recommendations/user/{username}")
    def recommendations_for_user(username: str, page: int = 1):
        """One page of the user's teams, ordered by their own score."""
        if store.get_entity(KIND_USER, username) is None:
            raise ApiError(404, "user_not_found", f"no user {username}")
        if page < 1:
            raise ApiError(400, "bad_page", "page numbers start at 1")
        records = store.query(KIND_RECOMMENDATION, lead=username)
        records.sort(key=lambda r: (-r.get("lead_score", 0), r["call_id"]))
        size = config.page_size
        window = records[(page - 1) * size: page * size]
        total = len(records)
        return {
            "username": username,
            "page": page,
            "page_size": size,
            "total_recommendations": total,
            "total_pages": (total + size - 1) // size,
            "recommendations": [team_payload(r) for r in window],
        }

    @app.get("/teams")
    def teams(request: Request):
        """Call-centric team listing (admin view)."""
        allowed = {"call_id", "team_id"}
        unknown = set(request.query_params) - allowed
        if unknown:
            raise ApiError(400, "unknown_filter", f"unknown filter keys: {sorted(unknown)}")
        filters = {key: request.query_params[key] for key in allowed if key in request.query_params}
        return [team_payload(r) for r in store.query(KIND_RECOMMENDATION, **filters)]

    # -- workflow ------------------------------------------------------------

    @app.post("/teams/{team_id}/notify")
    def notify(team_id: str):
        with write_lock:
            record = expire_if_due(get_team_or_404(team_id))
            workflow = _workflow_of(record)
            try:
                workflow = workflow.notify()
            except IllegalTransition as exc:
                raise ApiError(409, "illegal_transition", str(exc))
            record = _store_workflow(store, record, workflow)
            for member in workflow.member_ids:
                store.put_entity(
                    KIND_NOTIFICATION,
                    {
                        "notification_id": f"{team_id}:{member}",
                        "team_id": team_id,
                        "username": member,
                        "message": (
                            f"You are proposed for team {team_id} on call "
                            f"{record['call_id']}; please accept or decline."
                        ),
                    },
                )
        return {"team_id": team_id, "state": record["state"]}

    @app.post("/teams/{team_id}/respond")
    def respond(team_id: str, body: RespondBody):
        with write_lock:
            record = expire_if_due(get_team_or_404(team_id))
            workflow = _workflow_of(record)
            try:
                workflow = workflow.respond(body.username, body.action == "accept")
            except NotAMember:
                raise ApiError(403, "not_a_member", f"{body.username} is not on this team")
            except DuplicateResponse:
                raise ApiError(409, "already_responded", f"{body.username} already responded")
            except IllegalTransition as exc:
                raise ApiError(409, "illegal_transition", str(exc))
            record = _store_workflow(store, record, workflow)
        return {
            "team_id": team_id,
            "state": record["state"],
            "responses": record["responses"],
        }

    @app.post("/teams/{team_id}/explain")
    def explain(team_id: str, body: ExplainBody):
        """Constraint report for a hypothetical add/remove/swap."""
        record = get_team_or_404(team_id)
        team = TeamRecommendation.from_dict(record)
        if body.action == "add":
            change = AddMember(body.user_id)
        elif body.action == "remove":
            change = RemoveMember(body.user_id)
        else:
            if not body.in_user_id:
                raise ApiError(422, "invalid_request", "swap requires in_user_id")
            change = SwapMember(body.user_id, body.in_user_id)
        profiles = {
            u["user_id"]: ResearcherProfile.from_dict(u)
            for u in store.query(KIND_USER)
        }
        try:
            report = explain_change(team, change, profiles, config)
        except UnknownUser as exc:
            raise ApiError(404, "user_not_found", f"no user {exc.args[0]}")
        except IllegalChange as exc:
            raise ApiError(400, "illegal_change", str(exc))
        return {"team_id": team_id, "report": report.to_dict()}

    # -- feedback --------------------------------------------------------

    @app.post("/feedback", status_code=201)
    def feedback(body: FeedbackBody):
        if not 1 <= body.rating <= 10:
            raise ApiError(422, "rating_out_of_range", "rating must be within 1-10")
        event = FeedbackEvent(
            user_id=body.username,
            call_id=body.call_id,
            rating=body.rating,
            period_id=body.period_id,
            timestamp=now(),
        )
        seq = store.append_event(event)
        return {"sequence": seq}

    # -- admin -----------------------------------------------------------

    @app.post("/admin/ingest")
    def admin_ingest(x_role: str | None = Header(default=None)):
        """Parse the configured corpora into the store; returns coverage stats."""
        require_admin(x_role)
        if corpus is None or corpus.calls is None or corpus.roster is None:
            raise ApiError(400, "no_corpus", "no corpus paths configured")
        reference = clock()
        calls = ingestion.parse_call_corpus(
            ingestion.load_call_corpus(corpus.calls), reference
        )
        for record in calls.records:
            store.put_entity(KIND_CALL, record.to_dict())
        admitted, funnel = ingestion.parse_researcher_roster(
            ingestion.load_roster(corpus.roster)
        )
        for profile in admitted:
            store.put_entity(KIND_USER, profile.to_dict())
        awards = None
        if corpus.awards is not None:
            awards = ingestion.parse_award_corpus(Path(corpus.awards))
            for award in awards.records:
                store.put_entity(KIND_AWARD, award.to_dict())
        stats = ingestion.ingestion_report(calls, funnel, awards)
        return stats.to_dict()

    @app.post("/admin/reindex")
    def admin_reindex(x_role: str | None = Header(default=None)):
        """Rebuild the corpus model and all stored recommendations."""
        require_admin(x_role)
        calls = [CallRecord.from_dict(r) for r in store.query(KIND_CALL)]
        profiles = [ResearcherProfile.from_dict(r) for r in store.query(KIND_USER)]
        if not calls or not profiles:
            raise ApiError(400, "nothing_to_index", "ingest calls and users first")
        model = build_corpus_model([c.synopsis for c in calls])
        state["model"] = model
        teams_written = 0
        with write_lock:
            for profile in profiles:
                for team in recommend_for_user(
                    profile, calls, profiles, model, config, STRATEGY_VECTOR
                ):
                    record = team.to_dict()
                    record["responses"] = {}
                    record["version"] = 0
                    previous = store.get_entity(KIND_RECOMMENDATION, team.team_id)
                    if previous is not None and previous["members"] == record["members"]:
                        # same composition: keep the workflow where it was
                        record["state"] = previous["state"]
                        record["responses"] = previous["responses"]
                        record["version"] = previous["version"]
                    store.put_entity(KIND_RECOMMENDATION, record)
                    teams_written += 1
        return {
            "calls": len(calls),
            "users": len(profiles),
            "teams": teams_written,
        }

    if static_dir is not None and Path(static_dir).exists():
        app.mount("/app", StaticFiles(directory=static_dir, html=True), name="webapp")

    return app
