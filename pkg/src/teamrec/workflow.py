"""Team-confirmation workflow: proposed teams are notified, then members
accept or decline until the team is confirmed, declined, or expires with the
call deadline.  Terminal states are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping


class IllegalTransition(Exception):
    """Requested event is not legal from the current state."""


class NotAMember(Exception):
    """Responder is not one of the notified team members."""


class DuplicateResponse(Exception):
    """Member already responded; responses are recorded once."""


class WorkflowState(str, Enum):
    PROPOSED = "proposed"
    NOTIFIED = "notified"
    CONFIRMED = "confirmed"
    DECLINED = "declined"
    EXPIRED = "expired"


class WorkflowEvent(str, Enum):
    NOTIFY = "notify"
    MEMBER_ACCEPT = "member_accept"
    MEMBER_DECLINE = "member_decline"
    EXPIRE = "expire"


TERMINAL_STATES = frozenset(
    {WorkflowState.CONFIRMED, WorkflowState.DECLINED, WorkflowState.EXPIRED}
)

# Every (state, event) pair not listed here is illegal.
LEGAL_TRANSITIONS: frozenset[tuple[WorkflowState, WorkflowEvent]] = frozenset(
    {
        (WorkflowState.PROPOSED, WorkflowEvent.NOTIFY),
        (WorkflowState.NOTIFIED, WorkflowEvent.MEMBER_ACCEPT),
        (WorkflowState.NOTIFIED, WorkflowEvent.MEMBER_DECLINE),
        (WorkflowState.PROPOSED, WorkflowEvent.EXPIRE),
        (WorkflowState.NOTIFIED, WorkflowEvent.EXPIRE),
    }
)


def next_state(
    state: WorkflowState, event: WorkflowEvent, *, all_accepted: bool = False
) -> WorkflowState:
    """Total transition function; raises IllegalTransition off the table.

    ``all_accepted`` decides whether a member acceptance completes the team
    (every member accepted) or leaves it waiting for the rest.
    """
    if (state, event) not in LEGAL_TRANSITIONS:
        raise IllegalTransition(f"{event.value} is illegal in state {state.value}")
    if event is WorkflowEvent.NOTIFY:
        return WorkflowState.NOTIFIED
    if event is WorkflowEvent.MEMBER_ACCEPT:
        return WorkflowState.CONFIRMED if all_accepted else WorkflowState.NOTIFIED
    if event is WorkflowEvent.MEMBER_DECLINE:
        return WorkflowState.DECLINED
    return WorkflowState.EXPIRED


RESPONSE_ACCEPT = "accept"
RESPONSE_DECLINE = "decline"


@dataclass(frozen=True)
class TeamWorkflow:
    """Workflow bookkeeping for one recommended team.

    ``member_ids`` are the candidates asked to confirm (the lead proposed the
    team and does not respond).  ``version`` increments on every transition
    so writers can detect lost updates.
    """

    team_id: str
    member_ids: tuple[str, ...]
    state: WorkflowState = WorkflowState.PROPOSED
    responses: tuple[tuple[str, str], ...] = ()
    version: int = 0

    @property
    def responses_map(self) -> dict[str, str]:
        return dict(self.responses)

    def notify(self) -> "TeamWorkflow":
        state = next_state(self.state, WorkflowEvent.NOTIFY)
        return replace(self, state=state, version=self.version + 1)

    def respond(self, username: str, accept: bool) -> "TeamWorkflow":
        event = WorkflowEvent.MEMBER_ACCEPT if accept else WorkflowEvent.MEMBER_DECLINE
        if (self.state, event) not in LEGAL_TRANSITIONS:
            raise IllegalTransition(
                f"{event.value} is illegal in state {self.state.value}"
            )
        if username not in self.member_ids:
            raise NotAMember(username)
        if username in self.responses_map:
            raise DuplicateResponse(username)
        responses = self.responses + (
            (username, RESPONSE_ACCEPT if accept else RESPONSE_DECLINE),
        )
        recorded = dict(responses)
        all_accepted = all(
            recorded.get(member) == RESPONSE_ACCEPT for member in self.member_ids
        )
        state = next_state(self.state, event, all_accepted=all_accepted)
        return replace(
            self, state=state, responses=responses, version=self.version + 1
        )

    def expire(self) -> "TeamWorkflow":
        state = next_state(self.state, WorkflowEvent.EXPIRE)
        return replace(self, state=state, version=self.version + 1)

    def to_dict(self) -> dict:
        return {
            "team_id": self.team_id,
            "member_ids": list(self.member_ids),
            "state": self.state.value,
            "responses": self.responses_map,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TeamWorkflow":
        return cls(
            team_id=data["team_id"],
            member_ids=tuple(data["member_ids"]),
            state=WorkflowState(data["state"]),
            responses=tuple((u, r) for u, r in dict(data["responses"]).items()),
            version=int(data["version"]),
        )
