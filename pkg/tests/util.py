"""Shared test helpers, including the independent greedy oracle.

The oracle deliberately re-implements team formation from the constraint
definitions using plain tuples and sets; it never calls into teamrec.teams,
so agreement between the two is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

from teamrec.ingestion import ResearcherProfile
from teamrec.matching import MatchScore, STRATEGY_FUZZY
from teamrec.skills import Skill, SkillSet


def make_skill_set(tokens) -> SkillSet:
    """One single-token skill per token; canon union == set(tokens)."""
    return SkillSet(tuple(Skill(t, (t,)) for t in sorted(set(tokens))))


def make_profile(user_id: str, tokens, designation: str = "Professor") -> ResearcherProfile:
    return ResearcherProfile(
        user_id=user_id,
        username=user_id,
        display_name=user_id,
        designation=designation,
        skills=make_skill_set(tokens),
    )


def make_candidate(profile: ResearcherProfile, score: int, call_id: str = "call-x"):
    return (
        profile,
        MatchScore(profile.user_id, call_id, STRATEGY_FUZZY, score),
    )


# --- independent greedy oracle ---------------------------------------------


@dataclass(frozen=True)
class OracleCandidate:
    user_id: str
    score: int
    skills: frozenset[str]


def oracle_cap(budget, team_cap, floor, allow_large, ceiling) -> int:
    if budget is None:
        return team_cap
    by_budget = budget // floor
    if allow_large and by_budget > team_cap:
        return min(by_budget, ceiling)
    return min(team_cap, by_budget)


def oracle_ok(members: list[OracleCandidate], budget, team_cap, floor, allow_large, ceiling) -> bool:
    n = len(members)
    if n > oracle_cap(budget, team_cap, floor, allow_large, ceiling):
        return False
    if budget is not None and budget < n * floor:
        return False
    for i, member in enumerate(members):
        others: set[str] = set()
        for j, other in enumerate(members):
            if j != i:
                others |= other.skills
        if not (member.skills - others):
            return False
    return True


def oracle_greedy(
    lead: OracleCandidate,
    candidates: list[OracleCandidate],
    budget,
    *,
    team_cap: int = 5,
    floor: int = 50_000,
    allow_large: bool = False,
    ceiling: int = 10,
) -> list[str] | None:
    """Sorted insertion with full constraint re-checks at every step."""
    ordered = sorted(candidates, key=lambda c: (-c.score, c.user_id))
    team = [lead]
    for candidate in ordered:
        if oracle_ok(team + [candidate], budget, team_cap, floor, allow_large, ceiling):
            team = team + [candidate]
    if len(team) < 2:
        return None
    return [member.user_id for member in team]
