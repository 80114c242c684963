"""Greedy team formation under hard constraints.

Matched researchers are considered in descending score order (ties by user
id) and added to the team only while all three constraints keep holding:

* ``size_cap`` -- at most 5 members, shrunk further when the call budget
  cannot fund that many at the per-participant floor, and raised past 5 only
  when large teams are explicitly allowed (never past the hard ceiling);
* ``budget_floor`` -- at least $50K of the call budget per member (a note,
  not a violation, when the budget is unknown);
* ``unique_skill`` -- every member contributes at least one canonical skill
  absent from the union of the other members' skills.

Candidates that would break a constraint are skipped and the scan continues,
which dominates truncating the sorted list.  A team needs the lead plus at
least one member; otherwise no team is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .ingestion import CallRecord, ResearcherProfile
from .matching import (
    STRATEGY_VECTOR,
    CorpusVectorModel,
    MatchList,
    MatchScore,
    score_pair,
    top_k_calls,
)
from .skills import SkillSet
from .workflow import WorkflowState


class UnknownUser(KeyError):
    """A change references a user absent from the profile index."""


class IllegalChange(ValueError):
    """A change is structurally invalid (e.g. removing the lead)."""


@dataclass(frozen=True)
class TeamingConfig:
    """All teaming tunables in one place."""

    k: int = 10
    team_cap: int = 5
    per_participant_floor: int = 50_000
    allow_large_teams: bool = False
    hard_ceiling: int = 10
    relevance_floor: int = 40
    page_size: int = 3
    max_recs_per_user_per_period: int | None = None

    def __post_init__(self) -> None:
        if self.team_cap < 2:
            raise ValueError("team_cap must be at least 2")
        if self.per_participant_floor <= 0:
            raise ValueError("per_participant_floor must be positive")
        if self.hard_ceiling < self.team_cap:
            raise ValueError("hard_ceiling must be at least team_cap")
        if self.page_size < 1:
            raise ValueError("page_size must be at least 1")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "team_cap": self.team_cap,
            "per_participant_floor": self.per_participant_floor,
            "allow_large_teams": self.allow_large_teams,
            "hard_ceiling": self.hard_ceiling,
            "relevance_floor": self.relevance_floor,
            "page_size": self.page_size,
            "max_recs_per_user_per_period": self.max_recs_per_user_per_period,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TeamingConfig":
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


CONSTRAINT_SIZE_CAP = "size_cap"
CONSTRAINT_BUDGET_FLOOR = "budget_floor"
CONSTRAINT_UNIQUE_SKILL = "unique_skill"
CONSTRAINT_IDS = (CONSTRAINT_SIZE_CAP, CONSTRAINT_BUDGET_FLOOR, CONSTRAINT_UNIQUE_SKILL)


@dataclass(frozen=True)
class ConstraintEntry:
    constraint: str
    satisfied: bool
    explanation: str

    def to_dict(self) -> dict:
        return {
            "constraint": self.constraint,
            "satisfied": self.satisfied,
            "explanation": self.explanation,
        }


@dataclass(frozen=True)
class ConstraintReport:
    """Per-constraint verdicts with the numbers that decided them.

    All three constraints are always present, in fixed order, so a team can
    explain which constraints a requested change would respect or violate.
    """

    entries: tuple[ConstraintEntry, ...]

    @property
    def all_satisfied(self) -> bool:
        return all(entry.satisfied for entry in self.entries)

    def entry(self, constraint: str) -> ConstraintEntry:
        for candidate in self.entries:
            if candidate.constraint == constraint:
                return candidate
        raise KeyError(constraint)

    def to_dict(self) -> dict:
        return {
            "all_satisfied": self.all_satisfied,
            "entries": [entry.to_dict() for entry in self.entries],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ConstraintReport":
        return cls(
            tuple(
                ConstraintEntry(e["constraint"], e["satisfied"], e["explanation"])
                for e in data["entries"]
            )
        )


def team_size_cap(budget: int | None, config: TeamingConfig) -> int:
    """Largest team the budget can carry, never above the configured caps."""
    if budget is None:
        return config.team_cap
    by_budget = budget // config.per_participant_floor
    if config.allow_large_teams and by_budget > config.team_cap:
        return min(by_budget, config.hard_ceiling)
    return min(config.team_cap, by_budget)


def check_constraints(
    member_skills: Sequence[SkillSet],
    budget: int | None,
    config: TeamingConfig,
    member_ids: Sequence[str] | None = None,
) -> ConstraintReport:
    """Evaluate all three constraints for a (hypothetical) team.

    ``member_ids`` is optional and only improves explanations; when omitted,
    members are referred to by position.
    """
    size = len(member_skills)
    if size == 0:
        raise ValueError("team must have at least one member")
    names = list(member_ids) if member_ids else [f"member {i + 1}" for i in range(size)]

    cap = team_size_cap(budget, config)
    size_ok = size <= cap
    size_note = f"{size} member(s) vs cap {cap}"
    if budget is not None:
        size_note += f" (budget ${budget:,} at ${config.per_participant_floor:,} per member)"

    if budget is None:
        budget_ok = True
        budget_note = "budget unknown; per-participant floor not enforced"
    else:
        budget_ok = budget >= config.per_participant_floor * size
        share = budget // size
        budget_note = (
            f"${share:,} per member vs floor ${config.per_participant_floor:,}"
        )

    unions: list[frozenset[str]] = [skills.canon_union() for skills in member_skills]
    lacking: list[str] = []
    for index in range(size):
        others: set[str] = set()
        for j in range(size):
            if j != index:
                others.update(unions[j])
        if not (unions[index] - others):
            lacking.append(names[index])
    unique_ok = not lacking
    if unique_ok:
        unique_note = "every member contributes a skill the others lack"
    else:
        unique_note = f"no unique skill from: {', '.join(lacking)}"

    return ConstraintReport(
        (
            ConstraintEntry(CONSTRAINT_SIZE_CAP, size_ok, size_note),
            ConstraintEntry(CONSTRAINT_BUDGET_FLOOR, budget_ok, budget_note),
            ConstraintEntry(CONSTRAINT_UNIQUE_SKILL, unique_ok, unique_note),
        )
    )


@dataclass(frozen=True)
class TeamRecommendation:
    """A proposed team: lead plus members in greedy insertion order."""

    team_id: str
    call_id: str
    lead: str
    lead_score: int
    members: tuple[MatchScore, ...]
    proposed_budget: int | None
    per_member_allocation: int | None
    report: ConstraintReport
    state: WorkflowState = WorkflowState.PROPOSED

    def __post_init__(self) -> None:
        if len(self.members) < 1:
            raise ValueError("a team needs the lead plus at least one member")
        if any(m.user_id == self.lead for m in self.members):
            raise ValueError("lead cannot also be a member")
        scores = [m.score for m in self.members]
        if scores != sorted(scores, reverse=True):
            raise ValueError("member scores must be non-increasing")

    @property
    def size(self) -> int:
        return 1 + len(self.members)

    def member_ids(self) -> tuple[str, ...]:
        return tuple(m.user_id for m in self.members)

    def to_dict(self) -> dict:
        return {
            "team_id": self.team_id,
            "call_id": self.call_id,
            "lead": self.lead,
            "lead_score": self.lead_score,
            "members": [m.to_dict() for m in self.members],
            "proposed_budget": self.proposed_budget,
            "per_member_allocation": self.per_member_allocation,
            "report": self.report.to_dict(),
            "state": self.state.value,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TeamRecommendation":
        return cls(
            team_id=data["team_id"],
            call_id=data["call_id"],
            lead=data["lead"],
            lead_score=data.get("lead_score", 0),
            members=tuple(MatchScore.from_dict(m) for m in data["members"]),
            proposed_budget=data.get("proposed_budget"),
            per_member_allocation=data.get("per_member_allocation"),
            report=ConstraintReport.from_dict(data["report"]),
            state=WorkflowState(data.get("state", "proposed")),
        )


def allocate_budget(team_size: int, budget: int | None) -> int | None:
    """Even split of the call budget, floored to whole dollars."""
    if team_size < 1:
        raise ValueError("team size must be at least 1")
    if budget is None:
        return None
    return budget // team_size


def build_team(
    call: CallRecord,
    lead: ResearcherProfile,
    candidates: Sequence[tuple[ResearcherProfile, MatchScore]],
    config: TeamingConfig,
    lead_score: int = 0,
) -> TeamRecommendation | None:
    """Greedy team formation around a lead for one call.

    Candidates (which must exclude the lead) are sorted by descending score,
    ties by ascending user id, and added one by one; a candidate that would
    violate any constraint is skipped and the scan continues.  Returns None
    when no team of at least two forms.
    """
    ordered = sorted(candidates, key=lambda pair: (-pair[1].score, pair[0].user_id))
    member_profiles: list[ResearcherProfile] = []
    member_scores: list[MatchScore] = []
    team_skills: list[SkillSet] = [lead.skills]
    team_ids: list[str] = [lead.user_id]
    for profile, score in ordered:
        trial_report = check_constraints(
            team_skills + [profile.skills],
            call.budget_total,
            config,
            member_ids=team_ids + [profile.user_id],
        )
        if not trial_report.all_satisfied:
            continue
        member_profiles.append(profile)
        member_scores.append(score)
        team_skills.append(profile.skills)
        team_ids.append(profile.user_id)
    if len(team_ids) < 2:
        return None
    size = len(team_ids)
    report = check_constraints(team_skills, call.budget_total, config, member_ids=team_ids)
    return TeamRecommendation(
        team_id=f"team-{call.call_id}-{lead.user_id}",
        call_id=call.call_id,
        lead=lead.user_id,
        lead_score=lead_score,
        members=tuple(member_scores),
        proposed_budget=call.budget_total,
        per_member_allocation=allocate_budget(size, call.budget_total),
        report=report,
    )


def _candidates_for_call(
    call: CallRecord,
    profiles: Sequence[ResearcherProfile],
    model: CorpusVectorModel | None,
    config: TeamingConfig,
    strategy: str,
    exclude: str | None = None,
) -> list[tuple[ResearcherProfile, MatchScore]]:
    candidates = []
    for profile in profiles:
        if profile.user_id == exclude or profile.skills.is_empty:
            continue
        score = score_pair(call, profile, model, strategy)
        if score.score >= config.relevance_floor:
            candidates.append((profile, score))
    return candidates


def recommend_for_user(
    user: ResearcherProfile,
    calls: Sequence[CallRecord],
    all_profiles: Sequence[ResearcherProfile],
    model: CorpusVectorModel | None,
    config: TeamingConfig,
    strategy: str = STRATEGY_VECTOR,
) -> list[TeamRecommendation]:
    """Teams with this user as lead for their best-matching calls.

    One attempt per entry of the user's top-k call list; the result keeps
    that order (the user's own score, descending) and is truncated to the
    per-period cap when one is configured.
    """
    ranked: MatchList = top_k_calls(
        user, calls, model, strategy, config.k, config.relevance_floor
    )
    calls_by_id = {call.call_id: call for call in calls}
    recommendations: list[TeamRecommendation] = []
    for entry in ranked.entries:
        call = calls_by_id[entry.call_id]
        candidates = _candidates_for_call(
            call, all_profiles, model, config, strategy, exclude=user.user_id
        )
        team = build_team(call, user, candidates, config, lead_score=entry.score)
        if team is not None:
            recommendations.append(team)
    if config.max_recs_per_user_per_period is not None:
        recommendations = recommendations[: config.max_recs_per_user_per_period]
    return recommendations


def recommend_for_call(
    call: CallRecord,
    all_profiles: Sequence[ResearcherProfile],
    model: CorpusVectorModel | None,
    config: TeamingConfig,
    strategy: str = STRATEGY_VECTOR,
) -> TeamRecommendation | None:
    """Best team for one call: highest-scoring matched user leads."""
    scored = _candidates_for_call(call, all_profiles, model, config, strategy)
    if not scored:
        return None
    scored.sort(key=lambda pair: (-pair[1].score, pair[0].user_id))
    lead_profile, lead_match = scored[0]
    return build_team(
        call, lead_profile, scored[1:], config, lead_score=lead_match.score
    )


# ---------------------------------------------------------------------------
# What-if changes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AddMember:
    user_id: str


@dataclass(frozen=True)
class RemoveMember:
    user_id: str


@dataclass(frozen=True)
class SwapMember:
    out_user_id: str
    in_user_id: str


TeamChange = AddMember | RemoveMember | SwapMember


def explain_change(
    team: TeamRecommendation,
    change: TeamChange,
    profiles: Mapping[str, ResearcherProfile],
    config: TeamingConfig,
) -> ConstraintReport:
    """Constraint report for the team as it would look after ``change``.

    Pure: the stored team is never touched.  Raises UnknownUser for ids
    absent from ``profiles`` and IllegalChange for structurally invalid
    requests (removing the lead, adding an existing member, ...).
    """
    current = [team.lead, *team.member_ids()]

    def resolve(user_id: str) -> ResearcherProfile:
        if user_id not in profiles:
            raise UnknownUser(user_id)
        return profiles[user_id]

    if isinstance(change, AddMember):
        resolve(change.user_id)
        if change.user_id in current:
            raise IllegalChange(f"{change.user_id} is already on the team")
        hypothetical = current + [change.user_id]
    elif isinstance(change, RemoveMember):
        resolve(change.user_id)
        if change.user_id == team.lead:
            raise IllegalChange("cannot remove the lead")
        if change.user_id not in current:
            raise IllegalChange(f"{change.user_id} is not on the team")
        hypothetical = [u for u in current if u != change.user_id]
    elif isinstance(change, SwapMember):
        resolve(change.out_user_id)
        resolve(change.in_user_id)
        if change.out_user_id == team.lead:
            raise IllegalChange("cannot swap out the lead")
        if change.out_user_id not in current:
            raise IllegalChange(f"{change.out_user_id} is not on the team")
        if change.in_user_id in current:
            raise IllegalChange(f"{change.in_user_id} is already on the team")
        hypothetical = [
            change.in_user_id if u == change.out_user_id else u for u in current
        ]
    else:
        raise IllegalChange(f"unsupported change {change!r}")

    for user_id in hypothetical:
        resolve(user_id)
    return check_constraints(
        [profiles[u].skills for u in hypothetical],
        team.proposed_budget,
        config,
        member_ids=hypothetical,
    )
