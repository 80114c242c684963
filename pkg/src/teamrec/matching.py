"""Call-to-researcher relevance scoring on a 0-100 integer scale.

Two strategies:

* ``fuzzy`` -- token-set overlap scaled by the harmonic mean of the two set
  sizes.  Corpus-free, cheap, good for short texts.  With token sets A and B:
  ``similarity = |A & B| * (|A| + |B|) / (2 * |A| * |B|)``, which is 1 exactly
  when the sets are identical and 0 when they are disjoint.
* ``vector`` -- cosine between tf-idf vectors under a model built from the
  call corpus (tf = raw count, idf = ln(1 + corpus_size / df)), or cosine
  over externally computed embeddings imported from a table.

Scores are rounded half-up to integers so results are reproducible across
platforms.  Note that rounding means similarities above 99.5% also display
as 100; exact 100/0 are still guaranteed for identical/disjoint inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .ingestion import CallRecord, ResearcherProfile
from .skills import SkillSet, normalize_text

STRATEGY_FUZZY = "fuzzy"
STRATEGY_VECTOR = "vector"
STRATEGIES = (STRATEGY_FUZZY, STRATEGY_VECTOR)

FLAG_EMPTY_SKILL_SET = "empty_skill_set"
FLAG_OUT_OF_VOCABULARY = "out_of_vocabulary"

MODEL_FORMAT_VERSION = 1


class EmptyCorpus(ValueError):
    """No usable synopses to build a model from."""


class DimensionMismatch(ValueError):
    """Imported embedding vectors do not all have the same width."""


class UnknownId(KeyError):
    """Imported model has no vector for the requested id."""


def round_half_up(value: float) -> int:
    """Round a non-negative value to the nearest integer, halves up."""
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class MatchScore:
    """One scored (researcher, call) pair."""

    user_id: str
    call_id: str
    strategy: str
    score: int
    flag: str | None = None

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not 0 <= self.score <= 100:
            raise ValueError(f"score {self.score} outside 0-100")

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "call_id": self.call_id,
            "strategy": self.strategy,
            "score": self.score,
            "flag": self.flag,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MatchScore":
        return cls(
            user_id=data["user_id"],
            call_id=data["call_id"],
            strategy=data["strategy"],
            score=data["score"],
            flag=data.get("flag"),
        )


@dataclass(frozen=True)
class MatchList:
    """Top-k calls for one user, scores non-increasing, ties by call id."""

    user_id: str
    entries: tuple[MatchScore, ...]
    k: int

    def __post_init__(self) -> None:
        if len(self.entries) > self.k:
            raise ValueError("more entries than k")
        seen: set[str] = set()
        previous: MatchScore | None = None
        for entry in self.entries:
            if entry.call_id in seen:
                raise ValueError(f"duplicate call {entry.call_id}")
            seen.add(entry.call_id)
            if previous is not None:
                if entry.score > previous.score:
                    raise ValueError("scores must be non-increasing")
                if entry.score == previous.score and entry.call_id < previous.call_id:
                    raise ValueError("equal scores must be ordered by call id")
            previous = entry

    def call_ids(self) -> tuple[str, ...]:
        return tuple(entry.call_id for entry in self.entries)


# ---------------------------------------------------------------------------
# Fuzzy strategy
# ---------------------------------------------------------------------------


def fuzzy_token_similarity(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    """Intersection size scaled by the harmonic mean of the set sizes."""
    if not a or not b:
        return 0.0
    intersection = len(a & b)
    if intersection == 0:
        return 0.0
    return intersection * (len(a) + len(b)) / (2 * len(a) * len(b))


def fuzzy_match(
    synopsis: str,
    skills: SkillSet,
    *,
    user_id: str = "",
    call_id: str = "",
) -> MatchScore:
    """Fuzzy score between a call synopsis and a researcher's skills."""
    skill_tokens = skills.canon_union()
    if not skill_tokens:
        return MatchScore(user_id, call_id, STRATEGY_FUZZY, 0, FLAG_EMPTY_SKILL_SET)
    synopsis_tokens = frozenset(normalize_text(synopsis))
    similarity = fuzzy_token_similarity(synopsis_tokens, skill_tokens)
    return MatchScore(user_id, call_id, STRATEGY_FUZZY, round_half_up(100 * similarity))


# ---------------------------------------------------------------------------
# Vector strategy
# ---------------------------------------------------------------------------


@dataclass
class CorpusVectorModel:
    """tf-idf statistics over a call corpus, or an imported embedding table.

    A built model scores by text; an imported model scores by stored vectors
    keyed on call/user ids.  After construction the model is immutable in
    practice and safe for concurrent readers.
    """

    source: str  # "built" | "imported"
    vocabulary: dict[str, int]
    document_frequencies: dict[str, int]
    corpus_size: int
    vectors: dict[str, tuple[float, ...]] | None = None
    dimension: int | None = None

    def idf(self, token: str) -> float:
        df = self.document_frequencies.get(token)
        if df is None:
            return 0.0
        return math.log(1 + self.corpus_size / df)

    def tfidf(self, tokens: Sequence[str]) -> dict[str, float]:
        counts: dict[str, int] = {}
        for token in tokens:
            if token in self.vocabulary:
                counts[token] = counts.get(token, 0) + 1
        return {token: count * self.idf(token) for token, count in counts.items()}

    def vector_for(self, identifier: str) -> tuple[float, ...]:
        if self.vectors is None or identifier not in self.vectors:
            raise UnknownId(identifier)
        return self.vectors[identifier]

    def to_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "source": self.source,
            "vocabulary": self.vocabulary,
            "document_frequencies": self.document_frequencies,
            "corpus_size": self.corpus_size,
            "vectors": {k: list(v) for k, v in self.vectors.items()} if self.vectors else None,
            "dimension": self.dimension,
        }

    def save(self, path: Path | str) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")),
            encoding="utf-8",
        )

    @classmethod
    def from_dict(cls, data: Mapping) -> "CorpusVectorModel":
        version = data.get("format_version")
        if version != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {version!r}")
        vectors = data.get("vectors")
        return cls(
            source=data["source"],
            vocabulary=dict(data["vocabulary"]),
            document_frequencies=dict(data["document_frequencies"]),
            corpus_size=data["corpus_size"],
            vectors={k: tuple(v) for k, v in vectors.items()} if vectors else None,
            dimension=data.get("dimension"),
        )

    @classmethod
    def load(cls, path: Path | str) -> "CorpusVectorModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def build_corpus_model(synopses: Sequence[str]) -> CorpusVectorModel:
    """Vocabulary and document frequencies over normalized synopsis tokens."""
    if not synopses:
        raise EmptyCorpus("no synopses")
    frequencies: dict[str, int] = {}
    for synopsis in synopses:
        for token in set(normalize_text(synopsis)):
            frequencies[token] = frequencies.get(token, 0) + 1
    if not frequencies:
        raise EmptyCorpus("corpus normalizes to no tokens")
    vocabulary = {token: index for index, token in enumerate(sorted(frequencies))}
    return CorpusVectorModel(
        source="built",
        vocabulary=vocabulary,
        document_frequencies=frequencies,
        corpus_size=len(synopses),
    )


def import_embeddings(path: Path | str) -> CorpusVectorModel:
    """Load an external embedding table: ``id<TAB>v1,v2,...,vn`` per line."""
    vectors: dict[str, tuple[float, ...]] = {}
    dimension: int | None = None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        identifier, _, values = line.partition("\t")
        if not values:
            raise ValueError(f"malformed embedding line for {identifier!r}")
        vector = tuple(float(v) for v in values.split(","))
        if dimension is None:
            dimension = len(vector)
        elif len(vector) != dimension:
            raise DimensionMismatch(
                f"vector for {identifier!r} has width {len(vector)}, expected {dimension}"
            )
        if identifier in vectors:
            raise ValueError(f"duplicate embedding id {identifier!r}")
        vectors[identifier] = vector
    if not vectors:
        raise EmptyCorpus("embedding table is empty")
    return CorpusVectorModel(
        source="imported",
        vocabulary={},
        document_frequencies={},
        corpus_size=len(vectors),
        vectors=vectors,
        dimension=dimension,
    )


def _cosine_sparse(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if len(a) > len(b):
        a, b = b, a
    dot = sum(weight * b.get(token, 0.0) for token, weight in a.items())
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def _cosine_dense(a: Sequence[float], b: Sequence[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(y * y for y in b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def vector_match(
    synopsis: str,
    skills: SkillSet,
    model: CorpusVectorModel,
    *,
    user_id: str = "",
    call_id: str = "",
) -> MatchScore:
    """Cosine score between a synopsis and a researcher's combined skill text.

    With a built model both sides are normalized and tf-idf weighted, so the
    score is symmetric in its two texts.  With an imported model the stored
    vectors for ``call_id`` and ``user_id`` are compared directly.
    """
    if model.source == "imported":
        cosine = _cosine_dense(model.vector_for(call_id), model.vector_for(user_id))
    else:
        synopsis_vector = model.tfidf(normalize_text(synopsis))
        skill_vector = model.tfidf(normalize_text(skills.joined_text()))
        if not synopsis_vector or not skill_vector:
            return MatchScore(
                user_id, call_id, STRATEGY_VECTOR, 0, FLAG_OUT_OF_VOCABULARY
            )
        cosine = _cosine_sparse(synopsis_vector, skill_vector)
    return MatchScore(
        user_id, call_id, STRATEGY_VECTOR, round_half_up(100 * max(0.0, cosine))
    )


# ---------------------------------------------------------------------------
# Ranking
# ---------------------------------------------------------------------------


def score_pair(
    call: CallRecord,
    profile: ResearcherProfile,
    model: CorpusVectorModel | None,
    strategy: str,
) -> MatchScore:
    """Score one (call, researcher) pair with the chosen strategy."""
    if strategy == STRATEGY_FUZZY:
        return fuzzy_match(
            call.synopsis, profile.skills, user_id=profile.user_id, call_id=call.call_id
        )
    if strategy == STRATEGY_VECTOR:
        if model is None:
            raise ValueError("vector strategy requires a model")
        return vector_match(
            call.synopsis, profile.skills, model, user_id=profile.user_id, call_id=call.call_id
        )
    raise ValueError(f"unknown strategy {strategy!r}")


def top_k_calls(
    user: ResearcherProfile,
    calls: Sequence[CallRecord],
    model: CorpusVectorModel | None,
    strategy: str,
    k: int,
    relevance_floor: int = 40,
) -> MatchList:
    """The user's best calls: scores descending, ties by ascending call id.

    Scores below ``relevance_floor`` are excluded before truncating to k.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    scores = [
        score
        for call in calls
        if (score := score_pair(call, user, model, strategy)).score >= relevance_floor
    ]
    scores.sort(key=lambda s: (-s.score, s.call_id))
    return MatchList(user.user_id, tuple(scores[:k]), k)
