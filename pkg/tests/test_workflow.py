from __future__ import annotations

import pytest

from teamrec.workflow import (
    LEGAL_TRANSITIONS,
    TERMINAL_STATES,
    DuplicateResponse,
    IllegalTransition,
    NotAMember,
    TeamWorkflow,
    WorkflowEvent,
    WorkflowState,
    next_state,
)


def _wf(members=("m1", "m2", "m3"), state=WorkflowState.PROPOSED):
    return TeamWorkflow(team_id="T1", member_ids=tuple(members), state=state)


def test_transition_table_is_exhaustive():
    """Every (state, event) pair either matches the legal table exactly or
    raises IllegalTransition."""
    expected_legal = {
        (WorkflowState.PROPOSED, WorkflowEvent.NOTIFY): WorkflowState.NOTIFIED,
        (WorkflowState.NOTIFIED, WorkflowEvent.MEMBER_ACCEPT): WorkflowState.NOTIFIED,
        (WorkflowState.NOTIFIED, WorkflowEvent.MEMBER_DECLINE): WorkflowState.DECLINED,
        (WorkflowState.PROPOSED, WorkflowEvent.EXPIRE): WorkflowState.EXPIRED,
        (WorkflowState.NOTIFIED, WorkflowEvent.EXPIRE): WorkflowState.EXPIRED,
    }
    assert set(expected_legal) == set(LEGAL_TRANSITIONS)
    for state in WorkflowState:
        for event in WorkflowEvent:
            if (state, event) in expected_legal:
                assert next_state(state, event) == expected_legal[(state, event)]
            else:
                with pytest.raises(IllegalTransition):
                    next_state(state, event)
    # the one conditional edge: final acceptance confirms the team
    assert (
        next_state(WorkflowState.NOTIFIED, WorkflowEvent.MEMBER_ACCEPT, all_accepted=True)
        == WorkflowState.CONFIRMED
    )


def test_terminal_states_reject_everything():
    for state in TERMINAL_STATES:
        for event in WorkflowEvent:
            with pytest.raises(IllegalTransition):
                next_state(state, event)


def test_notify_then_all_accept_confirms():
    wf = _wf().notify()
    assert wf.state == WorkflowState.NOTIFIED
    wf = wf.respond("m1", True)
    assert wf.state == WorkflowState.NOTIFIED
    wf = wf.respond("m2", True)
    wf = wf.respond("m3", True)
    assert wf.state == WorkflowState.CONFIRMED
    assert wf.responses_map == {"m1": "accept", "m2": "accept", "m3": "accept"}


def test_single_decline_declines_team():
    wf = _wf().notify().respond("m1", True).respond("m2", False)
    assert wf.state == WorkflowState.DECLINED


def test_respond_before_notify_is_illegal():
    with pytest.raises(IllegalTransition):
        _wf().respond("m1", True)


def test_respond_in_terminal_state_is_illegal():
    wf = _wf(members=("m1",)).notify().respond("m1", True)
    assert wf.state == WorkflowState.CONFIRMED
    with pytest.raises(IllegalTransition):
        wf.respond("m1", True)


def test_duplicate_response_rejected():
    wf = _wf().notify().respond("m1", True)
    with pytest.raises(DuplicateResponse):
        wf.respond("m1", False)


def test_non_member_rejected():
    wf = _wf().notify()
    with pytest.raises(NotAMember):
        wf.respond("stranger", True)


def test_notify_twice_is_illegal():
    wf = _wf().notify()
    with pytest.raises(IllegalTransition):
        wf.notify()


def test_expire_from_proposed_and_notified():
    assert _wf().expire().state == WorkflowState.EXPIRED
    assert _wf().notify().expire().state == WorkflowState.EXPIRED
    with pytest.raises(IllegalTransition):
        _wf().notify().expire().expire()


def test_version_increments_per_transition():
    wf = _wf()
    assert wf.version == 0
    wf = wf.notify()
    assert wf.version == 1
    wf = wf.respond("m1", True)
    assert wf.version == 2


def test_workflow_roundtrip():
    wf = _wf().notify().respond("m1", True)
    assert TeamWorkflow.from_dict(wf.to_dict()) == wf
