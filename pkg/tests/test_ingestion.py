from __future__ import annotations

from datetime import date

import pytest

from teamrec.ingestion import (
    CallRecord,
    FieldTally,
    MissingAwardNumber,
    MissingSynopsis,
    extract_budget,
    extract_deadlines,
    ingestion_report,
    merge_stats,
    parse_award_record,
    parse_call_corpus,
    parse_call_record,
    parse_researcher_roster,
)

REF = date(2026, 1, 15)


# --- deadlines --------------------------------------------------------------


def test_deadline_text_format():
    text = "Full Proposal Deadline Date: January 15, 2014"
    assert extract_deadlines(text) == (date(2014, 1, 15),)


def test_deadline_numeric_and_multiple():
    text = "Letters due 03/01/2026; full proposals due April 15, 2026."
    assert extract_deadlines(text) == (date(2026, 3, 1), date(2026, 4, 15))


def test_deadline_malformed_is_skipped():
    # February 30 does not exist; the match contributes nothing
    assert extract_deadlines("due February 30, 2026 or 04/01/2026") == (date(2026, 4, 1),)


def test_deadline_none():
    assert extract_deadlines("no dates here, not even 2026") == ()


# --- budgets ------------------------------------------------------------


def test_budget_cue_sentence():
    assert extract_budget("Estimated program budget: $6,000,000") == 6_000_000


def test_budget_absent():
    assert extract_budget("no monetary figure here") is None


def test_budget_anticipated_funding():
    assert extract_budget("Anticipated Funding Amount: $250,000 per award") == 250_000


def test_budget_prefers_cue_sentence_over_earlier_amount():
    text = "Awards run up to $500,000 each. The total program budget is $6,000,000."
    assert extract_budget(text) == 6_000_000


def test_budget_first_amount_wins_within_cue_sentence():
    text = "The program budget is $2,000,000 with awards of $400,000."
    assert extract_budget(text) == 2_000_000


def test_budget_fallback_first_occurrence():
    assert extract_budget("Fees: $100,000 now, $200,000 later.") == 100_000


def test_budget_multipliers():
    assert extract_budget("budget of $250K") == 250_000
    assert extract_budget("budget of $1.5M") == 1_500_000
    assert extract_budget("a budget of $2 million") == 2_000_000
    assert extract_budget("budget near $0.75 million") == 750_000


def test_budget_ignores_zero():
    assert extract_budget("a budget of $0") is None


# --- call records -------------------------------------------------------


def test_parse_call_record_full():
    raw = {
        "id": "C-1",
        "agency": "NSF",
        "url": "https://example.org/c1",
        "body": "Title: Example Call\nSupports testing parsers.\n"
        "Estimated program budget: $1,000,000.\nFull Proposal Deadline Date: March 3, 2026",
    }
    record = parse_call_record(raw, REF)
    assert record.title == "Example Call"
    assert record.synopsis.startswith("Title: Example Call")
    assert record.deadlines == (date(2026, 3, 3),)
    assert record.budget_total == 1_000_000
    assert record.is_open is True


def test_parse_call_record_closed():
    raw = {"id": "C-2", "body": "old call. Full Proposal Deadline Date: May 1, 2014"}
    assert parse_call_record(raw, REF).is_open is False


def test_parse_call_record_keywords_and_presplit_synopsis():
    raw = {
        "id": "C-9",
        "synopsis": "pre-split synopsis",
        "body": "longer body text",
        "keywords": ["ai", "teaming"],
    }
    record = parse_call_record(raw, REF)
    assert record.synopsis == "pre-split synopsis"
    assert record.keywords == ("ai", "teaming")


def test_parse_call_record_missing_synopsis():
    with pytest.raises(MissingSynopsis):
        parse_call_record({"id": "C-3", "body": "   "}, REF)


def test_parse_call_record_missing_id():
    with pytest.raises(ValueError):
        parse_call_record({"body": "text"}, REF)


def test_parse_call_corpus_ten_calls_one_without_title():
    raws = []
    for i in range(10):
        raw = {"id": f"C-{i}", "body": f"Synopsis text for call {i}."}
        if i != 4:
            raw["title"] = f"Call {i}"
        raws.append(raw)
    result = parse_call_corpus(raws, REF)
    assert len(result.records) == 10
    assert sum(1 for r in result.records if r.title) == 9


def test_parse_call_corpus_counts_rejections_and_duplicates():
    raws = [
        {"id": "A", "body": "fine"},
        {"id": "B", "body": ""},
        {"id": "A", "body": "duplicate"},
    ]
    result = parse_call_corpus(raws, REF)
    assert [r.call_id for r in result.records] == ["A"]
    assert result.rejected == (("B", "missing_synopsis"), ("A", "duplicate_id"))
    assert result.total == 3


def test_call_record_roundtrip(call_corpus):
    for record in call_corpus.records:
        assert CallRecord.from_dict(record.to_dict()) == record


def test_call_record_invariants():
    with pytest.raises(ValueError):
        CallRecord(call_id="x", synopsis="s", budget_total=0)
    with pytest.raises(ValueError):
        CallRecord(
            call_id="x",
            synopsis="s",
            deadlines=(date(2026, 2, 1), date(2026, 1, 1)),
        )


def test_parse_is_deterministic(call_corpus):
    from conftest import FIXTURES
    from teamrec.ingestion import load_call_corpus

    again = parse_call_corpus(load_call_corpus(FIXTURES / "calls.jsonl"), REF)
    assert again == call_corpus


# --- roster -------------------------------------------------------------


def _roster_record(username, designation="Professor", site="", scholar=""):
    return {
        "username": username,
        "display_name": username.title(),
        "designation": designation,
        "skills_site": site,
        "skills_scholar": scholar,
    }


def test_roster_designation_filter():
    records = [
        _roster_record("a", site="Robotics"),
        _roster_record("b", site="Databases"),
        _roster_record("c", "Administrative Coordinator", site="Scheduling"),
        _roster_record("d", site="Networks"),
        _roster_record("e", site="Compilers"),
    ]
    admitted, funnel = parse_researcher_roster(records)
    assert [p.username for p in admitted] == ["a", "b", "d", "e"]
    assert funnel.removed_by_designation == 1


def test_roster_drops_skillless():
    admitted, funnel = parse_researcher_roster([_roster_record("a")])
    assert admitted == []
    assert funnel.with_research_info == 0


def test_roster_duplicate_username_rejects_later():
    records = [
        _roster_record("a", site="Robotics"),
        _roster_record("a", site="Databases"),
    ]
    admitted, funnel = parse_researcher_roster(records)
    assert len(admitted) == 1
    assert admitted[0].skills.skills[0].display == "Robotics"
    assert funnel.duplicates == 1


def test_roster_funnel_conserves(funnel):
    skillless = funnel.remaining - funnel.with_research_info
    assert (
        funnel.with_research_info
        + funnel.removed_by_designation
        + skillless
        + funnel.duplicates
        == funnel.total_extracted
    )
    assert funnel.total_extracted == 20
    assert funnel.removed_by_designation == 3
    assert funnel.with_research_info == 15


def test_admitted_profiles_have_skills(profiles):
    for profile in profiles:
        assert not profile.skills.is_empty
        assert any(raws for _, raws in profile.raw_skills_by_source)


def test_roster_merges_scholar_skills(profiles):
    chen = next(p for p in profiles if p.username == "chen.wei")
    displays = chen.skills.displays()
    assert "Deep Learning" in displays  # site display wins over scholar duplicate
    assert any("graph" in d.lower() for d in displays)
    assert chen.has_scholar_profile


# --- awards -------------------------------------------------------------


def test_parse_award_record_golden():
    xml = (
        '<award agency="NSF"><number>AWD-9</number><title>T</title>'
        "<abstract>A</abstract><pi>p</pi><amount>12000</amount><year>2021</year></award>"
    )
    record = parse_award_record(xml)
    assert record.award_number == "AWD-9"
    assert record.agency_id == "NSF"
    assert record.amount == 12_000
    assert record.year == 2021


def test_parse_award_record_missing_number():
    with pytest.raises(MissingAwardNumber):
        parse_award_record("<award><title>T</title></award>")


def test_parse_award_record_missing_amount():
    record = parse_award_record("<award><number>A1</number></award>")
    assert record.amount is None


def test_parse_award_corpus(award_corpus):
    assert len(award_corpus.records) == 8
    assert award_corpus.rejected == ()
    missing_amount = next(r for r in award_corpus.records if r.award_number == "AWD-0004")
    assert missing_amount.amount is None
    for record in award_corpus.records:
        assert type(record).from_dict(record.to_dict()) == record


# --- report -------------------------------------------------------------


def test_percent_matches_published_style_truncation():
    # coverage tables truncate: 1782/1797 reports 99.1, not 99.2
    assert FieldTally(1797, 1797).percent == 100.0
    assert FieldTally(1782, 1797).percent == 99.1
    assert FieldTally(1626, 1797).percent == 90.4
    assert FieldTally(1729, 1797).percent == 96.2
    assert FieldTally(205, 240).percent == 85.4


def test_percent_empty_denominator_flagged():
    tally = FieldTally(0, 0)
    assert tally.percent == 100.0
    assert tally.empty_denominator


def test_ingestion_report_fixture(call_corpus, funnel):
    stats = ingestion_report(call_corpus, funnel)
    assert stats.field("calls").percent == 100.0
    assert stats.field("synopsis").percent == 100.0
    assert stats.field("title").percent == 95.0
    assert stats.field("deadline").percent == 90.0
    assert stats.field("budget").percent == 85.0
    rendered = stats.render_text()
    assert "title" in rendered and "95.0" in rendered


def test_merge_stats_is_sum():
    left = ingestion_report(
        parse_call_corpus([{"id": "a", "title": "t", "body": "x"}], REF)
    )
    right = ingestion_report(parse_call_corpus([{"id": "b", "body": "y"}], REF))
    merged = merge_stats(left, right)
    assert merged.field("calls").extracted == 2
    assert merged.field("title").extracted == 1
    assert merged.field("title").total == 2
