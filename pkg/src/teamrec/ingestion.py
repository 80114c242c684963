"""Corpus ingestion: funding calls, researcher rosters, and award archives.

Live scraping is replaced by deterministic parsing of local corpus files with
the same field semantics.  Extraction rules for titles, deadlines, and
budgets are simple documented pattern rules, so the extraction-coverage
report is reproducible byte-for-byte.

Corpus formats (also documented in the README):

* Call corpus: a JSON-lines file (one JSON object per line) or a directory of
  ``*.json`` files, one record each.  Fields: ``id``, ``agency``, ``url``,
  ``body`` (free text), optional pre-split ``title``/``synopsis`` and a
  ``keywords`` list.
* Roster: a tab-separated file with header columns ``username``,
  ``display_name``, ``designation``, ``skills_site``, ``skills_scholar``;
  skill cells are semicolon-separated.
* Award corpus: an ``<awards>`` XML document of ``<award agency="...">``
  elements with ``<number>``, ``<title>``, ``<abstract>``, ``<pi>``,
  ``<amount>``, ``<year>`` children.
"""

from __future__ import annotations

import csv
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .skills import SkillSet, build_skill_set


class MissingSynopsis(ValueError):
    """Call record has no synopsis and no body text; the record is rejected."""


class MissingAwardNumber(ValueError):
    """Award entry lacks a number; the entry is rejected."""


# ---------------------------------------------------------------------------
# Domain records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CallRecord:
    """One funding call."""

    call_id: str
    agency_id: str = ""
    url: str = ""
    title: str | None = None
    synopsis: str = ""
    deadlines: tuple[date, ...] = ()
    budget_total: int | None = None
    keywords: tuple[str, ...] = ()
    is_open: bool = False

    def __post_init__(self) -> None:
        if not self.synopsis.strip():
            raise MissingSynopsis(self.call_id)
        if self.budget_total is not None and self.budget_total <= 0:
            raise ValueError(f"budget for {self.call_id} must be positive")
        if list(self.deadlines) != sorted(self.deadlines):
            raise ValueError(f"deadlines for {self.call_id} must be ascending")

    def to_dict(self) -> dict:
        return {
            "call_id": self.call_id,
            "agency_id": self.agency_id,
            "url": self.url,
            "title": self.title,
            "synopsis": self.synopsis,
            "deadlines": [d.isoformat() for d in self.deadlines],
            "budget_total": self.budget_total,
            "keywords": list(self.keywords),
            "is_open": self.is_open,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CallRecord":
        return cls(
            call_id=data["call_id"],
            agency_id=data.get("agency_id", ""),
            url=data.get("url", ""),
            title=data.get("title"),
            synopsis=data["synopsis"],
            deadlines=tuple(date.fromisoformat(d) for d in data.get("deadlines", [])),
            budget_total=data.get("budget_total"),
            keywords=tuple(data.get("keywords", [])),
            is_open=bool(data.get("is_open", False)),
        )


ROLE_PARTICIPANT = "participant"
ROLE_ADMINISTRATOR = "administrator"


@dataclass(frozen=True)
class ResearcherProfile:
    """One candidate team participant."""

    user_id: str
    username: str
    display_name: str = ""
    designation: str = ""
    role: str = ROLE_PARTICIPANT
    raw_skills_by_source: tuple[tuple[str, tuple[str, ...]], ...] = ()
    skills: SkillSet = SkillSet()
    has_scholar_profile: bool = False

    def raw_skills(self) -> dict[str, list[str]]:
        return {source: list(raws) for source, raws in self.raw_skills_by_source}

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "username": self.username,
            "display_name": self.display_name,
            "designation": self.designation,
            "role": self.role,
            "raw_skills_by_source": self.raw_skills(),
            "skills": self.skills.to_list(),
            "has_scholar_profile": self.has_scholar_profile,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ResearcherProfile":
        raw = tuple(
            (source, tuple(raws))
            for source, raws in data.get("raw_skills_by_source", {}).items()
        )
        return cls(
            user_id=data["user_id"],
            username=data["username"],
            display_name=data.get("display_name", ""),
            designation=data.get("designation", ""),
            role=data.get("role", ROLE_PARTICIPANT),
            raw_skills_by_source=raw,
            skills=SkillSet.from_list(data.get("skills", [])),
            has_scholar_profile=bool(data.get("has_scholar_profile", False)),
        )


@dataclass(frozen=True)
class AwardRecord:
    """One previously funded award."""

    award_number: str
    agency_id: str = ""
    title: str = ""
    synopsis: str = ""
    pi_username: str = ""
    amount: int | None = None
    year: int | None = None

    def to_dict(self) -> dict:
        return {
            "award_number": self.award_number,
            "agency_id": self.agency_id,
            "title": self.title,
            "synopsis": self.synopsis,
            "pi_username": self.pi_username,
            "amount": self.amount,
            "year": self.year,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AwardRecord":
        return cls(
            award_number=data["award_number"],
            agency_id=data.get("agency_id", ""),
            title=data.get("title", ""),
            synopsis=data.get("synopsis", ""),
            pi_username=data.get("pi_username", ""),
            amount=data.get("amount"),
            year=data.get("year"),
        )


# ---------------------------------------------------------------------------
# Field extraction rules
# ---------------------------------------------------------------------------

_MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4, "may": 5, "june": 6,
    "july": 7, "august": 8, "september": 9, "october": 10, "november": 11,
    "december": 12,
}
_TEXT_DATE_RE = re.compile(
    r"\b(" + "|".join(_MONTHS) + r")\s+(\d{1,2}),\s*(\d{4})\b", re.IGNORECASE
)
_NUMERIC_DATE_RE = re.compile(r"\b(\d{1,2})/(\d{1,2})/(\d{4})\b")

_AMOUNT_RE = re.compile(
    r"\$\s*(\d{1,3}(?:,\d{3})+|\d+)(\.\d+)?\s*(million|billion|[km])?\b",
    re.IGNORECASE,
)
_MULTIPLIERS = {
    "k": Decimal(1_000),
    "m": Decimal(1_000_000),
    "million": Decimal(1_000_000),
    "billion": Decimal(1_000_000_000),
}
_BUDGET_CUES = ("budget", "funding amount", "anticipated funding")
_SENTENCE_BREAK_RE = re.compile(r"(?<=[.!?])\s+|\n+")
_TITLE_LINE_RE = re.compile(r"^\s*title\s*:\s*(.+?)\s*$", re.IGNORECASE)


def extract_deadlines(text: str) -> tuple[date, ...]:
    """All dates matching ``Month DD, YYYY`` or ``MM/DD/YYYY``, ascending.

    Calls with multiple tracks list several deadlines; all are kept rather
    than guessing one.  Matches that are not real calendar dates are skipped
    and the record is kept.
    """
    found: set[date] = set()
    for m in _TEXT_DATE_RE.finditer(text):
        try:
            found.add(date(int(m.group(3)), _MONTHS[m.group(1).lower()], int(m.group(2))))
        except ValueError:
            continue
    for m in _NUMERIC_DATE_RE.finditer(text):
        try:
            found.add(date(int(m.group(3)), int(m.group(1)), int(m.group(2))))
        except ValueError:
            continue
    return tuple(sorted(found))


def _sentences(text: str) -> Iterator[str]:
    start = 0
    for m in _SENTENCE_BREAK_RE.finditer(text):
        yield text[start: m.start()]
        start = m.end()
    if start < len(text):
        yield text[start:]


def extract_budget(text: str) -> int | None:
    """Program-level total in whole dollars, or None when nothing matches.

    Recognizes ``$`` amounts with comma groups and optional K/M/million
    multipliers.  Amounts in the same sentence as a cue phrase ("budget",
    "funding amount", "anticipated funding") are preferred; ties go to the
    first occurrence.
    """
    plain: list[int] = []
    cued: list[int] = []
    for sentence in _sentences(text):
        has_cue = any(cue in sentence.lower() for cue in _BUDGET_CUES)
        for m in _AMOUNT_RE.finditer(sentence):
            value = Decimal(m.group(1).replace(",", "") + (m.group(2) or ""))
            if m.group(3):
                value *= _MULTIPLIERS[m.group(3).lower()]
            dollars = int(value.quantize(Decimal(1), rounding=ROUND_HALF_UP))
            if dollars <= 0:
                continue
            (cued if has_cue else plain).append(dollars)
    if cued:
        return cued[0]
    if plain:
        return plain[0]
    return None


def _title_from_body(body: str) -> str | None:
    for line in body.splitlines():
        m = _TITLE_LINE_RE.match(line)
        if m:
            return m.group(1)
    return None


def parse_call_record(raw: Mapping, reference_date: date) -> CallRecord:
    """Build a CallRecord from one raw corpus record.

    Raises MissingSynopsis when neither a synopsis field nor body text is
    present; malformed dates are skipped without rejecting the record.
    """
    call_id = str(raw.get("id") or "").strip()
    if not call_id:
        raise ValueError("call record missing id")
    body = str(raw.get("body") or "")
    synopsis = str(raw.get("synopsis") or "").strip() or body.strip()
    if not synopsis:
        raise MissingSynopsis(call_id)
    text = body if body.strip() else synopsis
    title = raw.get("title")
    title = str(title).strip() if title else _title_from_body(body)
    deadlines = extract_deadlines(text)
    return CallRecord(
        call_id=call_id,
        agency_id=str(raw.get("agency") or ""),
        url=str(raw.get("url") or ""),
        title=title or None,
        synopsis=synopsis,
        deadlines=deadlines,
        budget_total=extract_budget(text),
        keywords=tuple(str(k) for k in raw.get("keywords") or ()),
        is_open=bool(deadlines) and max(deadlines) >= reference_date,
    )


@dataclass(frozen=True)
class CallCorpusResult:
    """Accepted call records plus per-record rejections, conserving totals."""

    records: tuple[CallRecord, ...]
    rejected: tuple[tuple[str, str], ...] = ()  # (record tag, reason)

    @property
    def total(self) -> int:
        return len(self.records) + len(self.rejected)


def parse_call_corpus(
    raw_records: Iterable[Mapping], reference_date: date
) -> CallCorpusResult:
    records: list[CallRecord] = []
    rejected: list[tuple[str, str]] = []
    seen: set[str] = set()
    for index, raw in enumerate(raw_records):
        tag = str(raw.get("id") or f"record-{index}")
        try:
            record = parse_call_record(raw, reference_date)
        except MissingSynopsis:
            rejected.append((tag, "missing_synopsis"))
            continue
        except ValueError:
            rejected.append((tag, "missing_id"))
            continue
        if record.call_id in seen:
            rejected.append((tag, "duplicate_id"))
            continue
        seen.add(record.call_id)
        records.append(record)
    return CallCorpusResult(tuple(records), tuple(rejected))


def load_call_corpus(path: Path | str) -> list[dict]:
    """Read raw call records from a JSONL file or a directory of JSON files."""
    path = Path(path)
    if path.is_dir():
        return [
            json.loads(child.read_text(encoding="utf-8"))
            for child in sorted(path.glob("*.json"))
        ]
    raws = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            raws.append(json.loads(line))
    return raws


# ---------------------------------------------------------------------------
# Researcher roster
# ---------------------------------------------------------------------------

DEFAULT_DESIGNATION_DENY_LIST = (
    "administrative",
    "coordinator",
    "adjunct",
    "emeritus",
    "staff",
)

ROSTER_COLUMNS = (
    "username",
    "display_name",
    "designation",
    "skills_site",
    "skills_scholar",
)


@dataclass(frozen=True)
class RosterFunnel:
    """How the raw roster narrows down to profiles admitted to matching."""

    total_extracted: int
    duplicates: int
    removed_by_designation: int
    remaining: int
    with_research_info: int

    def to_dict(self) -> dict:
        return {
            "total_extracted": self.total_extracted,
            "duplicates": self.duplicates,
            "removed_by_designation": self.removed_by_designation,
            "remaining": self.remaining,
            "with_research_info": self.with_research_info,
        }


def load_roster(path: Path | str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle, delimiter="\t")
        header = reader.fieldnames or []
        missing = [c for c in ROSTER_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"roster missing columns: {', '.join(missing)}")
        return [dict(row) for row in reader]


def _split_skills(cell: str | None) -> list[str]:
    if not cell:
        return []
    return [part.strip() for part in cell.split(";") if part.strip()]


def parse_researcher_roster(
    records: Sequence[Mapping],
    deny_list: Sequence[str] = DEFAULT_DESIGNATION_DENY_LIST,
) -> tuple[list[ResearcherProfile], RosterFunnel]:
    """Filter the raw roster down to researchers admitted to matching.

    Later records with a username already seen are rejected.  Designations
    matching the (case-insensitive substring) deny list are removed; the
    default list targets non-research roles.  Profiles whose skills normalize
    to nothing are dropped: without skill information they cannot be matched.
    """
    lowered_deny = tuple(d.lower() for d in deny_list)
    admitted: list[ResearcherProfile] = []
    seen: set[str] = set()
    duplicates = removed = skillless = 0
    for raw in records:
        username = str(raw.get("username") or "").strip()
        designation = str(raw.get("designation") or "").strip()
        if not username:
            raise ValueError("roster record missing username")
        if username in seen:
            duplicates += 1
            continue
        seen.add(username)
        if any(term in designation.lower() for term in lowered_deny):
            removed += 1
            continue
        site = _split_skills(raw.get("skills_site"))
        scholar = _split_skills(raw.get("skills_scholar"))
        skills = build_skill_set({"site": site, "scholar": scholar})
        if skills.is_empty:
            skillless += 1
            continue
        admitted.append(
            ResearcherProfile(
                user_id=username,
                username=username,
                display_name=str(raw.get("display_name") or username),
                designation=designation,
                raw_skills_by_source=(("site", tuple(site)), ("scholar", tuple(scholar))),
                skills=skills,
                has_scholar_profile=bool(scholar),
            )
        )
    total = len(records)
    funnel = RosterFunnel(
        total_extracted=total,
        duplicates=duplicates,
        removed_by_designation=removed,
        remaining=total - duplicates - removed,
        with_research_info=len(admitted),
    )
    return admitted, funnel


# ---------------------------------------------------------------------------
# Awards
# ---------------------------------------------------------------------------


def _child_text(element: ET.Element, tag: str) -> str:
    child = element.find(tag)
    return (child.text or "").strip() if child is not None else ""


def parse_award_record(raw: str | ET.Element) -> AwardRecord:
    """Parse one ``<award>`` element; only a missing number rejects it."""
    element = ET.fromstring(raw) if isinstance(raw, str) else raw
    number = _child_text(element, "number")
    if not number:
        raise MissingAwardNumber("award entry without a number")
    amount_text = _child_text(element, "amount").replace(",", "").lstrip("$")
    year_text = _child_text(element, "year")
    return AwardRecord(
        award_number=number,
        agency_id=element.get("agency", ""),
        title=_child_text(element, "title"),
        synopsis=_child_text(element, "abstract"),
        pi_username=_child_text(element, "pi"),
        amount=int(amount_text) if amount_text else None,
        year=int(year_text) if year_text else None,
    )


@dataclass(frozen=True)
class AwardCorpusResult:
    records: tuple[AwardRecord, ...]
    rejected: tuple[tuple[str, str], ...] = ()

    @property
    def total(self) -> int:
        return len(self.records) + len(self.rejected)


def parse_award_corpus(source: str | Path) -> AwardCorpusResult:
    """Parse an ``<awards>`` document from a path or an XML string."""
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif source.lstrip().startswith("<"):
        text = source
    else:
        text = Path(source).read_text(encoding="utf-8")
    root = ET.fromstring(text)
    records: list[AwardRecord] = []
    rejected: list[tuple[str, str]] = []
    seen: set[str] = set()
    for index, element in enumerate(root.iter("award")):
        try:
            record = parse_award_record(element)
        except MissingAwardNumber:
            rejected.append((f"entry-{index}", "missing_award_number"))
            continue
        if record.award_number in seen:
            rejected.append((record.award_number, "duplicate_award_number"))
            continue
        seen.add(record.award_number)
        records.append(record)
    return AwardCorpusResult(tuple(records), tuple(rejected))


# ---------------------------------------------------------------------------
# Extraction-coverage report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldTally:
    """Extraction count for one field.

    ``percent`` is truncated (not rounded) to one decimal, matching how
    agency-style coverage tables are reported.  An empty denominator reports
    100.0 but is flagged so the report always renders.
    """

    extracted: int
    total: int

    def __post_init__(self) -> None:
        if self.extracted > self.total:
            raise ValueError("extracted count cannot exceed total")

    @property
    def empty_denominator(self) -> bool:
        return self.total == 0

    @property
    def percent(self) -> float:
        if self.total == 0:
            return 100.0
        return ((1000 * self.extracted) // self.total) / 10


@dataclass(frozen=True)
class ExtractionStats:
    """Per-field extraction tallies plus the roster funnel."""

    fields: tuple[tuple[str, FieldTally], ...]
    funnel: RosterFunnel | None = None

    def field(self, name: str) -> FieldTally:
        for field_name, tally in self.fields:
            if field_name == name:
                return tally
        raise KeyError(name)

    def to_dict(self) -> dict:
        payload = {
            name: {
                "extracted": tally.extracted,
                "total": tally.total,
                "percent": tally.percent,
                "empty_denominator": tally.empty_denominator,
            }
            for name, tally in self.fields
        }
        return {
            "fields": payload,
            "funnel": self.funnel.to_dict() if self.funnel else None,
        }

    def render_text(self) -> str:
        lines = [f"{'Type':<20}{'Number':>10}{'% Extracted':>14}"]
        for name, tally in self.fields:
            flag = " (no records)" if tally.empty_denominator else ""
            lines.append(f"{name:<20}{tally.extracted:>10}{tally.percent:>13.1f}{flag}")
        if self.funnel:
            f = self.funnel
            lines.append("")
            lines.append(
                f"roster: {f.total_extracted} extracted, {f.duplicates} duplicate, "
                f"{f.removed_by_designation} removed by designation, "
                f"{f.remaining} remaining, {f.with_research_info} with research info"
            )
        return "\n".join(lines)


def ingestion_report(
    calls: CallCorpusResult | None = None,
    funnel: RosterFunnel | None = None,
    awards: AwardCorpusResult | None = None,
) -> ExtractionStats:
    """Extraction-coverage statistics over one ingestion run."""
    fields: list[tuple[str, FieldTally]] = []
    if calls is not None:
        total = calls.total
        records = calls.records
        fields.extend(
            [
                ("calls", FieldTally(len(records), total)),
                ("title", FieldTally(sum(1 for r in records if r.title), total)),
                ("deadline", FieldTally(sum(1 for r in records if r.deadlines), total)),
                ("budget", FieldTally(sum(1 for r in records if r.budget_total is not None), total)),
                ("synopsis", FieldTally(len(records), total)),
            ]
        )
    if awards is not None:
        fields.append(("awards", FieldTally(len(awards.records), awards.total)))
    return ExtractionStats(tuple(fields), funnel)


def merge_stats(left: ExtractionStats, right: ExtractionStats) -> ExtractionStats:
    """Associative merge so per-file ingestion can run in parallel."""
    merged: dict[str, FieldTally] = dict(left.fields)
    for name, tally in right.fields:
        if name in merged:
            prev = merged[name]
            merged[name] = FieldTally(prev.extracted + tally.extracted, prev.total + tally.total)
        else:
            merged[name] = tally
    funnel = left.funnel or right.funnel
    if left.funnel and right.funnel:
        a, b = left.funnel, right.funnel
        funnel = RosterFunnel(
            a.total_extracted + b.total_extracted,
            a.duplicates + b.duplicates,
            a.removed_by_designation + b.removed_by_designation,
            a.remaining + b.remaining,
            a.with_research_info + b.with_research_info,
        )
    return ExtractionStats(tuple(merged.items()), funnel)
