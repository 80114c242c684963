from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teamrec.ingestion import CallRecord
from teamrec.matching import STRATEGY_FUZZY
from teamrec.teams import (
    AddMember,
    CONSTRAINT_BUDGET_FLOOR,
    CONSTRAINT_SIZE_CAP,
    CONSTRAINT_UNIQUE_SKILL,
    ConstraintReport,
    IllegalChange,
    RemoveMember,
    SwapMember,
    TeamRecommendation,
    TeamingConfig,
    UnknownUser,
    allocate_budget,
    build_team,
    check_constraints,
    explain_change,
    recommend_for_call,
    recommend_for_user,
    team_size_cap,
)

from util import (
    OracleCandidate,
    make_candidate,
    make_profile,
    make_skill_set,
    oracle_greedy,
)

CONFIG = TeamingConfig()
FIXTURE_CONFIG = TeamingConfig(relevance_floor=25)


def _call(call_id="call-x", budget=None, synopsis="synopsis text"):
    return CallRecord(call_id=call_id, synopsis=synopsis, budget_total=budget)


# --- size cap ---------------------------------------------------------------


def test_size_cap_without_budget_is_team_cap():
    assert team_size_cap(None, CONFIG) == 5


def test_size_cap_shrinks_with_budget():
    assert team_size_cap(150_000, CONFIG) == 3
    assert team_size_cap(49_999, CONFIG) == 0


def test_size_cap_large_teams_clipped_to_ceiling():
    config = TeamingConfig(allow_large_teams=True)
    assert team_size_cap(1_000_000, config) == 10  # floor gives 20, ceiling 10
    assert team_size_cap(150_000, config) == 3     # below cap: normal rule


def test_size_cap_large_teams_disabled_by_default():
    assert team_size_cap(1_000_000, CONFIG) == 5


@given(
    st.integers(min_value=50_000, max_value=2_000_000),
    st.integers(min_value=10_000, max_value=200_000),
    st.integers(min_value=0, max_value=150_000),
)
@settings(max_examples=200)
def test_size_cap_monotone_in_floor(budget, floor, bump):
    lo = TeamingConfig(per_participant_floor=floor)
    hi = TeamingConfig(per_participant_floor=floor + bump)
    assert team_size_cap(budget, hi) <= team_size_cap(budget, lo)


# --- constraint checks --------------------------------------------------


def test_identical_skill_sets_violate_unique_skill():
    skills = make_skill_set(["a", "b"])
    report = check_constraints([skills, skills], None, CONFIG)
    entry = report.entry(CONSTRAINT_UNIQUE_SKILL)
    assert not entry.satisfied
    assert not report.all_satisfied


def test_budget_floor_satisfied_with_three_members():
    report = check_constraints(
        [make_skill_set([c]) for c in "abc"], 160_000, CONFIG
    )
    entry = report.entry(CONSTRAINT_BUDGET_FLOOR)
    assert entry.satisfied
    assert "53,333" in entry.explanation


def test_six_members_violate_default_cap():
    report = check_constraints(
        [make_skill_set([c]) for c in "abcdef"], None, CONFIG
    )
    assert not report.entry(CONSTRAINT_SIZE_CAP).satisfied


def test_budget_unknown_is_satisfied_with_note():
    report = check_constraints([make_skill_set(["a"])], None, CONFIG)
    entry = report.entry(CONSTRAINT_BUDGET_FLOOR)
    assert entry.satisfied
    assert "unknown" in entry.explanation


def test_report_always_lists_all_three():
    report = check_constraints([make_skill_set(["a"])], None, CONFIG)
    assert [e.constraint for e in report.entries] == [
        CONSTRAINT_SIZE_CAP,
        CONSTRAINT_BUDGET_FLOOR,
        CONSTRAINT_UNIQUE_SKILL,
    ]
    assert ConstraintReport.from_dict(report.to_dict()) == report


# --- budget allocation --------------------------------------------------


def test_allocate_budget():
    assert allocate_budget(5, 250_000) == 50_000
    assert allocate_budget(3, None) is None
    assert allocate_budget(4, 200_001) == 50_000


def test_allocate_budget_needs_positive_size():
    with pytest.raises(ValueError):
        allocate_budget(0, 100)


# --- build_team ---------------------------------------------------------


def test_build_team_no_candidates_is_none():
    lead = make_profile("lead", ["x"])
    assert build_team(_call(), lead, [], CONFIG) is None


def test_build_team_table2_shape():
    """Five matched researchers, scores 84,84,83,80,76, pairwise-distinct
    skills, no budget: all five team up in score order, the 84-84 tie
    resolved by ascending user id."""
    lead = make_profile("u-agf", ["search", "reinforcement"])
    candidates = [
        make_candidate(make_profile("u-hu", ["materials"]), 84),
        make_candidate(make_profile("u-val", ["biology"]), 83),
        make_candidate(make_profile("u-zand", ["hardware"]), 80),
        make_candidate(make_profile("u-luo", ["mobile"]), 76),
    ]
    team = build_team(_call(budget=None), lead, candidates, CONFIG, lead_score=84)
    assert team is not None
    assert team.size == 5
    assert team.lead == "u-agf"
    assert team.member_ids() == ("u-hu", "u-val", "u-zand", "u-luo")
    assert [m.score for m in team.members] == [84, 83, 80, 76]
    assert team.report.all_satisfied


def test_build_team_tie_breaks_by_user_id():
    lead = make_profile("lead", ["L"])
    candidates = [
        make_candidate(make_profile("bbb", ["x"]), 90),
        make_candidate(make_profile("aaa", ["y"]), 90),
    ]
    team = build_team(_call(), lead, candidates, CONFIG)
    assert team.member_ids() == ("aaa", "bbb")


def test_build_team_skips_violators_and_continues():
    lead = make_profile("lead", ["alpha"])
    twin = make_profile("twin", ["alpha"])        # no unique skill vs lead
    fresh = make_profile("fresh", ["beta"])
    team = build_team(
        _call(), lead, [make_candidate(twin, 95), make_candidate(fresh, 60)], CONFIG
    )
    assert team.member_ids() == ("fresh",)


def test_build_team_respects_budget_cap():
    lead = make_profile("lead", ["a"])
    candidates = [
        make_candidate(make_profile(f"user{i}", [f"skill{i}"]), 90 - i)
        for i in range(5)
    ]
    # $150K funds 3 members total at the $50K floor
    team = build_team(_call(budget=150_000), lead, candidates, CONFIG)
    assert team.size == 3
    assert team.per_member_allocation == 50_000


def test_build_team_matches_oracle_on_random_instances():
    rng = random.Random(99)
    pool = [f"s{i}" for i in range(8)]
    for _ in range(100):
        lead_tokens = rng.sample(pool, rng.randint(1, 4))
        lead = make_profile("lead", lead_tokens)
        candidates = []
        oracle_candidates = []
        for i in range(rng.randint(0, 12)):
            tokens = rng.sample(pool, rng.randint(1, 4))
            score = rng.randint(40, 100)
            user_id = f"u{i:02}"
            candidates.append(make_candidate(make_profile(user_id, tokens), score))
            oracle_candidates.append(
                OracleCandidate(user_id, score, frozenset(tokens))
            )
        budget = rng.choice([None, 100_000, 150_000, 260_000, 600_000])
        team = build_team(_call(budget=budget), lead, candidates, CONFIG)
        expected = oracle_greedy(
            OracleCandidate("lead", 100, frozenset(lead_tokens)),
            oracle_candidates,
            budget,
        )
        if expected is None:
            assert team is None
        else:
            assert team is not None
            assert [team.lead, *team.member_ids()] == expected


# --- recommend_for_user / recommend_for_call ------------------------------


def test_recommend_for_user_empty_when_nothing_clears_floor():
    user = make_profile("u", ["nomatch"])
    other = make_profile("o", ["different"])
    calls = [_call("c1", synopsis="totally unrelated text")]
    assert recommend_for_user(user, calls, [user, other], None, CONFIG, STRATEGY_FUZZY) == []


def test_recommend_for_user_fixture_reports_all_satisfied(calls, profiles, corpus_model):
    for user in profiles:
        for team in recommend_for_user(
            user, calls, profiles, corpus_model, FIXTURE_CONFIG
        ):
            assert team.report.all_satisfied
            assert team.lead == user.user_id
            assert team.size >= 2


def test_recommend_for_user_orders_by_lead_score(calls, profiles, corpus_model):
    for user in profiles:
        teams = recommend_for_user(user, calls, profiles, corpus_model, FIXTURE_CONFIG)
        scores = [t.lead_score for t in teams]
        assert scores == sorted(scores, reverse=True)


def test_recommend_for_user_truncates_to_period_cap():
    user = make_profile("lead", ["alpha", "omega"])
    others = [make_profile(f"m{i}", ["alpha", f"extra{i}"]) for i in range(3)]
    calls = [_call(f"c{i}", synopsis="alpha omega") for i in range(5)]
    config = TeamingConfig(relevance_floor=0, max_recs_per_user_per_period=2)
    full = TeamingConfig(relevance_floor=0)
    capped = recommend_for_user(user, calls, [user, *others], None, config, STRATEGY_FUZZY)
    uncapped = recommend_for_user(user, calls, [user, *others], None, full, STRATEGY_FUZZY)
    assert len(uncapped) == 5
    assert capped == uncapped[:2]


def test_recommend_for_call_single_match_is_none():
    call = _call("c1", synopsis="alpha beta")
    only = make_profile("solo", ["alpha", "beta"])
    stranger = make_profile("other", ["unrelated"])
    assert recommend_for_call(call, [only, stranger], None, CONFIG, STRATEGY_FUZZY) is None


def test_recommend_for_call_two_matches_highest_leads():
    call = _call("c1", synopsis="alpha beta gamma delta")
    strong = make_profile("strong", ["alpha", "beta", "gamma"])
    weak = make_profile("weak", ["alpha", "delta"])
    config = TeamingConfig(relevance_floor=0)
    team = recommend_for_call(call, [weak, strong], None, config, STRATEGY_FUZZY)
    assert team is not None
    assert team.lead == "strong"
    assert team.member_ids() == ("weak",)


def test_recommend_for_call_skips_duplicate_skill_candidates():
    call = _call("c1", synopsis="alpha beta")
    lead = make_profile("aa.lead", ["alpha", "beta"])
    clone = make_profile("zz.clone", ["alpha", "beta"])
    extra = make_profile("extra", ["alpha", "zeta"])
    config = TeamingConfig(relevance_floor=0)
    team = recommend_for_call(call, [lead, clone, extra], None, config, STRATEGY_FUZZY)
    assert team is not None
    assert team.lead == "aa.lead"  # 100-100 tie: ascending user id picks the lead
    # the clone adds no unique skill next to the lead and is skipped; the
    # greedy scan continues and still picks up the weaker candidate
    assert team.member_ids() == ("extra",)


# --- explain_change -------------------------------------------------------


def _sample_team():
    lead = make_profile("lead", ["alpha", "beta"])
    m1 = make_profile("m1", ["gamma"])
    m2 = make_profile("m2", ["delta"])
    extra = make_profile("extra", ["epsilon"])
    twin = make_profile("twin", ["gamma"])
    team = build_team(
        _call(budget=300_000),
        lead,
        [make_candidate(m1, 80), make_candidate(m2, 70)],
        CONFIG,
        lead_score=90,
    )
    profiles = {p.user_id: p for p in (lead, m1, m2, extra, twin)}
    return team, profiles


def test_explain_remove_recomputes_for_smaller_team():
    team, profiles = _sample_team()
    report = explain_change(team, RemoveMember("m1"), profiles, CONFIG)
    # hypothetical team of 2 at $300K: $150K per member
    assert report.all_satisfied
    assert "150,000" in report.entry(CONSTRAINT_BUDGET_FLOOR).explanation
    direct = check_constraints(
        [profiles["lead"].skills, profiles["m2"].skills], 300_000, CONFIG,
        member_ids=["lead", "m2"],
    )
    assert report == direct


def test_explain_add_sixth_member_flags_size_cap():
    lead = make_profile("lead", ["s0"])
    candidates = [
        make_candidate(make_profile(f"u{i}", [f"s{i}"]), 90 - i) for i in range(1, 5)
    ]
    team = build_team(_call(budget=None), lead, candidates, CONFIG)
    assert team.size == 5
    sixth = make_profile("sixth", ["s9"])
    profiles = {p.user_id: p for p in [lead, sixth]}
    profiles.update({c[0].user_id: c[0] for c in candidates})
    report = explain_change(team, AddMember("sixth"), profiles, CONFIG)
    assert not report.entry(CONSTRAINT_SIZE_CAP).satisfied
    assert report.entry(CONSTRAINT_UNIQUE_SKILL).satisfied


def test_explain_swap_duplicate_skills_flags_unique_skill():
    team, profiles = _sample_team()
    report = explain_change(team, SwapMember("m2", "twin"), profiles, CONFIG)
    assert not report.entry(CONSTRAINT_UNIQUE_SKILL).satisfied


def test_explain_change_is_pure():
    team, profiles = _sample_team()
    before = team.to_dict()
    explain_change(team, RemoveMember("m1"), profiles, CONFIG)
    assert team.to_dict() == before


def test_explain_change_errors():
    team, profiles = _sample_team()
    with pytest.raises(UnknownUser):
        explain_change(team, AddMember("ghost"), profiles, CONFIG)
    with pytest.raises(IllegalChange):
        explain_change(team, RemoveMember("lead"), profiles, CONFIG)
    with pytest.raises(IllegalChange):
        explain_change(team, RemoveMember("extra"), profiles, CONFIG)
    with pytest.raises(IllegalChange):
        explain_change(team, AddMember("m1"), profiles, CONFIG)
    with pytest.raises(IllegalChange):
        explain_change(team, SwapMember("extra", "twin"), profiles, CONFIG)
    with pytest.raises(IllegalChange):
        explain_change(team, SwapMember("m1", "m2"), profiles, CONFIG)


# --- properties -----------------------------------------------------------


def test_raising_floor_never_grows_team():
    rng = random.Random(5)
    pool = [f"s{i}" for i in range(8)]
    for _ in range(60):
        lead = make_profile("lead", rng.sample(pool, rng.randint(1, 3)))
        candidates = [
            make_candidate(
                make_profile(f"u{i}", rng.sample(pool, rng.randint(1, 3))),
                rng.randint(40, 100),
            )
            for i in range(rng.randint(0, 8))
        ]
        budget = rng.choice([120_000, 260_000, 500_000])
        loose = build_team(_call(budget=budget), lead, candidates, TeamingConfig())
        tight = build_team(
            _call(budget=budget),
            lead,
            candidates,
            TeamingConfig(per_participant_floor=80_000),
        )
        if tight is not None:
            assert loose is not None
            assert tight.size <= loose.size


def test_config_invariants_enforced():
    with pytest.raises(ValueError):
        TeamingConfig(team_cap=1)
    with pytest.raises(ValueError):
        TeamingConfig(per_participant_floor=0)
    with pytest.raises(ValueError):
        TeamingConfig(hard_ceiling=3)
    with pytest.raises(ValueError):
        TeamingConfig(page_size=0)


def test_team_serialization_roundtrip():
    team, _ = _sample_team()
    assert TeamRecommendation.from_dict(team.to_dict()) == team
