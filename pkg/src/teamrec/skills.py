"""Skill and free-text normalization.

Raw skill strings arrive from several sources (institution pages, scholar
profiles) with inconsistent casing, punctuation, and inflection.  This module
reduces them to canonical token lists: lowercase, tokenized on
non-alphanumerics, stop words removed, and suffix-stripped by a fixed rule
table.  The stop-word list and stemmer rules ship as plain-text data files
(``data/stopwords.txt``, ``data/stem_rules.txt``) so tests can pin them and a
richer stemmer can be substituted without code changes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator, Mapping, Sequence

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_MIN_STEM_LEN = 3


@dataclass(frozen=True)
class StemRule:
    suffix: str
    replacement: str = ""
    unless_ends: tuple[str, ...] = ()


def _data_text(name: str) -> str:
    return resources.files("teamrec.data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    words = set()
    for line in _data_text("stopwords.txt").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


@lru_cache(maxsize=1)
def load_stem_rules() -> tuple[StemRule, ...]:
    rules = []
    for line in _data_text("stem_rules.txt").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        suffix = parts[0]
        replacement = parts[1] if len(parts) > 1 else ""
        guards = tuple(g for g in parts[2].split(",") if g) if len(parts) > 2 else ()
        if len(replacement) >= len(suffix):
            raise ValueError(f"stem rule {suffix!r} must shorten the word")
        rules.append(StemRule(suffix, replacement, guards))
    # Longest suffix first; at equal length only one rule can match a word.
    return tuple(sorted(rules, key=lambda r: -len(r.suffix)))


def stem_token(token: str, rules: Sequence[StemRule] | None = None) -> str:
    """Strip suffixes from ``token`` until no rule applies.

    Rules are tried longest-suffix-first.  A rule applies only when the
    result keeps at least three characters and the word does not end in one
    of the rule's guard suffixes.  Every rule shortens the word, so the loop
    terminates and the result is a fixed point of the stemmer.
    """
    if rules is None:
        rules = load_stem_rules()
    word = token
    while True:
        for rule in rules:
            if not word.endswith(rule.suffix):
                continue
            if any(word.endswith(guard) for guard in rule.unless_ends):
                continue
            candidate = word[: len(word) - len(rule.suffix)] + rule.replacement
            if len(candidate) >= _MIN_STEM_LEN:
                word = candidate
                break
        else:
            return word


def normalize_text(text: str) -> list[str]:
    """Canonical token list for arbitrary text.

    Lowercase, split on non-alphanumerics, drop stop words, stem.  Stems that
    land on a stop word ("cans" -> "can") are dropped too; that keeps
    normalization idempotent.
    """
    stop = load_stopwords()
    rules = load_stem_rules()
    out: list[str] = []
    for raw in _TOKEN_RE.findall(text.lower()):
        if raw in stop:
            continue
        stemmed = stem_token(raw, rules)
        if stemmed and stemmed not in stop:
            out.append(stemmed)
    return out


def normalize_skill(raw: str) -> list[str]:
    """Canonical token list for one raw skill string."""
    return normalize_text(raw)


@dataclass(frozen=True)
class Skill:
    """One normalized skill: the display form shown to users plus its canon."""

    display: str
    canon: tuple[str, ...]


@dataclass(frozen=True)
class SkillSet:
    """Deduplicated skills in deterministic (lexicographic-by-canon) order."""

    skills: tuple[Skill, ...] = ()

    def __len__(self) -> int:
        return len(self.skills)

    def __iter__(self) -> Iterator[Skill]:
        return iter(self.skills)

    @property
    def is_empty(self) -> bool:
        return not self.skills

    def canon_union(self) -> frozenset[str]:
        """Union of all canon tokens, used for overlap checks."""
        tokens: set[str] = set()
        for skill in self.skills:
            tokens.update(skill.canon)
        return frozenset(tokens)

    def joined_text(self) -> str:
        """All display forms as one text blob (for document-style scoring)."""
        return " ".join(skill.display for skill in self.skills)

    def displays(self) -> tuple[str, ...]:
        return tuple(skill.display for skill in self.skills)

    def to_list(self) -> list[dict]:
        return [{"display": s.display, "canon": list(s.canon)} for s in self.skills]

    @classmethod
    def from_list(cls, items: Sequence[Mapping]) -> "SkillSet":
        return cls(
            tuple(Skill(str(i["display"]), tuple(i["canon"])) for i in items)
        )


def build_skill_set(raw_by_source: Mapping[str, Sequence[str]]) -> SkillSet:
    """Merge raw skill strings from multiple sources into one SkillSet.

    Sources are visited in mapping order, which is the merge precedence
    (institution page before scholar profile).  Skills with the same canon
    are merged keeping the display form from the earliest source; within one
    source the lexicographically smallest display wins, so input order within
    a source never matters.  Strings that normalize to nothing are dropped.
    """
    chosen: dict[tuple[str, ...], str] = {}
    for source, raws in raw_by_source.items():
        per_source: dict[tuple[str, ...], str] = {}
        for raw in raws:
            canon = tuple(normalize_skill(raw))
            if not canon:
                continue
            display = raw.strip()
            prev = per_source.get(canon)
            if prev is None or display < prev:
                per_source[canon] = display
        for canon, display in per_source.items():
            chosen.setdefault(canon, display)
    return SkillSet(tuple(Skill(chosen[c], c) for c in sorted(chosen)))
