"""Retrospective evaluation and user-feedback aggregation.

Hit@k asks, for each principal investigator with at least one actual award,
whether any of those awards shows up in their top-k recommendation list over
the award corpus.  PI-level hit rate is the headline number; the award-level
rate is emitted alongside for transparency.  PIs with awards but no
recommendation list count as misses and are flagged, never silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Mapping, Sequence

from .ingestion import AwardRecord, CallRecord, ResearcherProfile
from .matching import CorpusVectorModel, MatchList, top_k_calls


@dataclass(frozen=True)
class FeedbackEvent:
    """One Likert rating (1-10) of a recommended call by a user."""

    user_id: str
    call_id: str
    rating: int
    period_id: str = ""
    timestamp: datetime = datetime(1970, 1, 1)

    def __post_init__(self) -> None:
        if not 1 <= self.rating <= 10:
            raise ValueError(f"rating {self.rating} outside 1-10")

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "call_id": self.call_id,
            "rating": self.rating,
            "period_id": self.period_id,
            "timestamp": self.timestamp.isoformat(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FeedbackEvent":
        return cls(
            user_id=data["user_id"],
            call_id=data["call_id"],
            rating=int(data["rating"]),
            period_id=data.get("period_id", ""),
            timestamp=datetime.fromisoformat(data["timestamp"]),
        )


@dataclass(frozen=True)
class UserHit:
    user_id: str
    hit: bool
    matched_award_ids: tuple[str, ...]
    had_match_list: bool

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "hit": self.hit,
            "matched_award_ids": list(self.matched_award_ids),
            "had_match_list": self.had_match_list,
        }


@dataclass(frozen=True)
class EvalReport:
    k: int
    hit_rate: float
    per_user: tuple[UserHit, ...]
    award_hit_rate: float
    pis_without_lists: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "hit_rate": self.hit_rate,
            "per_user": [u.to_dict() for u in self.per_user],
            "award_hit_rate": self.award_hit_rate,
            "pis_without_lists": list(self.pis_without_lists),
        }

    def render_text(self) -> str:
        lines = [
            f"hit@{self.k}: {self.hit_rate:.3f} over {len(self.per_user)} PIs "
            f"(award-level {self.award_hit_rate:.3f})"
        ]
        lines.append(f"{'PI':<24}{'hit':<6}matched awards")
        for user in self.per_user:
            matched = ", ".join(user.matched_award_ids) or "-"
            note = "" if user.had_match_list else " (no recommendation list)"
            lines.append(f"{user.user_id:<24}{'yes' if user.hit else 'no':<6}{matched}{note}")
        return "\n".join(lines)


def hit_rate_at_k(
    recommendations: Mapping[str, MatchList],
    actuals: Sequence[AwardRecord],
    k: int,
) -> EvalReport:
    """PI-level hit rate: an award in the top-k entries counts as a hit."""
    awards_by_pi: dict[str, list[AwardRecord]] = {}
    for award in actuals:
        awards_by_pi.setdefault(award.pi_username, []).append(award)
    per_user: list[UserHit] = []
    missing: list[str] = []
    hits = 0
    award_hits = 0
    for pi in sorted(awards_by_pi):
        match_list = recommendations.get(pi)
        had_list = match_list is not None
        top = set(match_list.call_ids()[:k]) if match_list else set()
        if not had_list:
            missing.append(pi)
        matched = tuple(
            a.award_number for a in awards_by_pi[pi] if a.award_number in top
        )
        award_hits += len(matched)
        hit = bool(matched)
        hits += hit
        per_user.append(UserHit(pi, hit, matched, had_list))
    evaluated = len(per_user)
    total_awards = len(actuals)
    return EvalReport(
        k=k,
        hit_rate=hits / evaluated if evaluated else 0.0,
        per_user=tuple(per_user),
        award_hit_rate=award_hits / total_awards if total_awards else 0.0,
        pis_without_lists=tuple(missing),
    )


def award_match_lists(
    profiles: Sequence[ResearcherProfile],
    awards: Sequence[AwardRecord],
    model: CorpusVectorModel | None,
    strategy: str,
    k: int,
    relevance_floor: int = 0,
) -> dict[str, MatchList]:
    """Per-PI top-k lists over award synopses, for retrospective evaluation.

    Awards stand in for calls; their synopses are matched against each
    profile with no relevance floor by default so every PI gets a full list.
    """
    pseudo_calls = [_award_as_call(award) for award in awards]
    return {
        profile.user_id: top_k_calls(
            profile, pseudo_calls, model, strategy, k, relevance_floor
        )
        for profile in profiles
    }


def _award_as_call(award: AwardRecord) -> CallRecord:
    return CallRecord(
        call_id=award.award_number,
        agency_id=award.agency_id,
        synopsis=award.synopsis or award.title or award.award_number,
    )


@dataclass(frozen=True)
class FeedbackSummary:
    """How many ratings met the well-matched threshold, plus follow-ups."""

    total: int
    well_matched: int
    threshold: int
    below_threshold_by_user: tuple[tuple[str, tuple[str, ...]], ...]

    def below_for(self, user_id: str) -> tuple[str, ...]:
        for user, calls in self.below_threshold_by_user:
            if user == user_id:
                return calls
        return ()

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "well_matched": self.well_matched,
            "threshold": self.threshold,
            "below_threshold_by_user": {
                user: list(calls) for user, calls in self.below_threshold_by_user
            },
        }


def feedback_summary(
    events: Sequence[FeedbackEvent], threshold: int = 7
) -> FeedbackSummary:
    """Count ratings at or above ``threshold`` and list the rest per user."""
    below: dict[str, list[str]] = {}
    well_matched = 0
    for event in events:
        if event.rating >= threshold:
            well_matched += 1
        else:
            below.setdefault(event.user_id, []).append(event.call_id)
    return FeedbackSummary(
        total=len(events),
        well_matched=well_matched,
        threshold=threshold,
        below_threshold_by_user=tuple(
            (user, tuple(calls)) for user, calls in sorted(below.items())
        ),
    )
