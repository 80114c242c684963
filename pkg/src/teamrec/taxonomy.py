"""Map free text to flat taxonomy codes (ACM-CCS / JEL style) at a threshold.

Taxonomy terms are short phrases with no corpus statistics behind them, so
scoring reuses the corpus-free fuzzy token-set similarity on the same 0-100
scale as call matching.  A ~150-term computing sample ships with the package
for tests and demos; a full taxonomy is user-supplied data.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .matching import fuzzy_token_similarity, round_half_up
from .skills import normalize_text


class DuplicateCode(ValueError):
    """Two taxonomy lines share a code."""


class EmptyFile(ValueError):
    """Taxonomy file contains no entries."""


@dataclass(frozen=True)
class TaxonomyEntry:
    code: str
    term: str
    canon: tuple[str, ...]


@dataclass(frozen=True)
class Taxonomy:
    name: str
    entries: tuple[TaxonomyEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


def load_taxonomy(path: Path | str, name: str | None = None) -> Taxonomy:
    """Load a tab-separated ``code<TAB>term`` file; canons are precomputed."""
    path = Path(path)
    entries: list[TaxonomyEntry] = []
    seen: set[str] = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        code, _, term = line.partition("\t")
        code = code.strip()
        term = term.strip()
        if not code or not term:
            raise ValueError(f"malformed taxonomy line: {line!r}")
        if code in seen:
            raise DuplicateCode(code)
        seen.add(code)
        entries.append(TaxonomyEntry(code, term, tuple(normalize_text(term))))
    if not entries:
        raise EmptyFile(str(path))
    return Taxonomy(name or path.stem, tuple(entries))


def sample_taxonomy() -> Taxonomy:
    """The bundled computing-terms sample."""
    with resources.as_file(
        resources.files("teamrec.data").joinpath("taxonomy_sample.tsv")
    ) as path:
        return load_taxonomy(path, name="computing-sample")


def map_text(
    text: str, threshold: int, taxonomy: Taxonomy
) -> list[tuple[str, str, int]]:
    """Codes whose terms match ``text`` at or above ``threshold``.

    Returns (code, term, score) triples sorted by descending score, ties by
    ascending code.  Raising the threshold never adds results.
    """
    if not 0 <= threshold <= 100:
        raise ValueError("threshold must be within 0-100")
    text_tokens = frozenset(normalize_text(text))
    results: list[tuple[str, str, int]] = []
    for entry in taxonomy.entries:
        score = round_half_up(
            100 * fuzzy_token_similarity(text_tokens, frozenset(entry.canon))
        )
        if score >= threshold:
            results.append((entry.code, entry.term, score))
    results.sort(key=lambda item: (-item[2], item[0]))
    return results
