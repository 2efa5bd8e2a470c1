"""Local concept store with alias lookup, rule-based noun-phrase
detection, and the recursive maximum-match concept resolver.

The store is a line-delimited JSON file standing in for a remote
knowledge-base search API. Lookup is exact over normalized names and
aliases; the fuzziness needed for multi-word queries comes from the
maximum-match recursion, not from the lookup itself.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

logger = logging.getLogger(__name__)

TAG_NOUN = "NOUN"
TAG_PROPER = "PROPER"
TAG_ADJ = "ADJ"
TAG_OTHER = "OTHER"
_TAGS = frozenset({TAG_NOUN, TAG_PROPER, TAG_ADJ, TAG_OTHER})
_CHUNK_TAGS = frozenset({TAG_NOUN, TAG_PROPER, TAG_ADJ})


@dataclass(eq=False)
class Concept:
    """A knowledge-store record.

    Meta properties (name, aliases, notable_for, notable_types) are short
    and precise; description and domain_properties hold long text that
    needs association-based term selection before it can expand a query.
    """

    concept_id: str
    name: str
    aliases: list[str] = field(default_factory=list)
    notable_for: list[str] = field(default_factory=list)
    notable_types: list[str] = field(default_factory=list)
    description: str = ""
    domain_properties: dict[str, str] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Concept) and self.concept_id == other.concept_id

    def __hash__(self) -> int:
        return hash(self.concept_id)


def normalize_phrase(phrase: str) -> str:
    """Lookup key: lowercase, punctuation removed, single-spaced."""
    cleaned = "".join(ch if ch.isalnum() or ch.isspace() else "" for ch in phrase)
    return " ".join(cleaned.lower().split())


class ConceptStore:
    """Immutable concept records plus a normalized name/alias lookup."""

    def __init__(self, concepts: dict[str, Concept]):
        self.concepts = concepts
        self.skipped_records = 0
        self._lookup: dict[str, str] = {}
        for concept_id in sorted(concepts):
            concept = concepts[concept_id]
            for surface in [concept.name, *concept.aliases]:
                key = normalize_phrase(surface)
                if not key:
                    continue
                existing = self._lookup.get(key)
                if existing is None:
                    self._lookup[key] = concept_id
                elif existing != concept_id:
                    # deterministic winner: lexicographically smaller id
                    logger.warning(
                        "concept store: %r maps to both %s and %s; keeping %s",
                        key, existing, concept_id, min(existing, concept_id),
                    )
                    self._lookup[key] = min(existing, concept_id)

    def __len__(self) -> int:
        return len(self.concepts)

    def search(self, phrase: str) -> Concept | None:
        concept_id = self._lookup.get(normalize_phrase(phrase))
        return self.concepts[concept_id] if concept_id is not None else None


def load_concept_store(path: str | Path) -> ConceptStore:
    """Load a store file; duplicate ids are fatal, malformed records skipped."""
    concepts: dict[str, Concept] = {}
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                concept = Concept(
                    concept_id=obj["concept_id"],
                    name=obj["name"],
                    aliases=list(obj.get("aliases", [])),
                    notable_for=list(obj.get("notable_for", [])),
                    notable_types=list(obj.get("notable_types", [])),
                    description=obj.get("description", ""),
                    domain_properties=dict(obj.get("domain_properties", {})),
                )
                if not isinstance(concept.concept_id, str) or not concept.concept_id:
                    raise ValueError("concept_id must be a non-empty string")
                if not isinstance(concept.name, str) or not concept.name:
                    raise ValueError("name must be a non-empty string")
            except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
                skipped += 1
                logger.debug("%s:%d: skipping malformed record (%s)", path, lineno, exc)
                continue
            if concept.concept_id in concepts:
                raise ValueError(f"{path}: duplicate concept_id {concept.concept_id!r}")
            concepts[concept.concept_id] = concept
    if skipped:
        logger.warning("%s: skipped %d malformed record(s)", path, skipped)
    store = ConceptStore(concepts)
    store.skipped_records = skipped
    return store


def concept_search(store: ConceptStore, phrase: str) -> Concept | None:
    """Exact normalized match against names and aliases; best hit or None."""
    return store.search(phrase)


@dataclass(frozen=True)
class NounPhrase:
    words: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("a noun phrase needs at least one word")

    def text(self) -> str:
        return " ".join(self.words)


class LexiconTagger:
    """Word-list part-of-speech tagger.

    Each lexicon entry maps a word to its most frequent tag. Unknown
    capitalized words are tagged PROPER, other unknowns NOUN.
    """

    def __init__(self, lexicon: dict[str, str]):
        for word, tag in lexicon.items():
            if tag not in _TAGS:
                raise ValueError(f"unknown tag {tag!r} for word {word!r}")
        self._lexicon = {word.lower(): tag for word, tag in lexicon.items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "LexiconTagger":
        return cls(_parse_lexicon(Path(path).read_text("utf-8"), str(path)))

    @classmethod
    def bundled(cls) -> "LexiconTagger":
        text = resources.files("mbsearch.data").joinpath("lexicon.tsv").read_text("utf-8")
        return cls(_parse_lexicon(text, "<bundled lexicon>"))

    def tag(self, word: str) -> str:
        key = word.lower()
        hit = self._lexicon.get(key)
        if hit is None:
            stripped = key.strip("".join(ch for ch in key if not ch.isalnum()))
            hit = self._lexicon.get(stripped) if stripped else None
        if hit is not None:
            return hit
        return TAG_PROPER if word[:1].isupper() else TAG_NOUN


def _parse_lexicon(text: str, origin: str) -> dict[str, str]:
    lexicon: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            word, tag = line.rstrip("\n").split("\t")
        except ValueError:
            raise ValueError(f"{origin}:{lineno}: expected 'word<TAB>tag'") from None
        lexicon[word] = tag
    return lexicon


def detect_noun_phrases(query_text: str, tagger: LexiconTagger) -> list[NounPhrase]:
    """Chunk maximal (ADJ|NOUN|PROPER)+ runs that end in a noun or proper noun."""
    words = query_text.split()
    tags = [tagger.tag(word) for word in words]

    phrases: list[NounPhrase] = []
    run: list[tuple[str, str]] = []

    def flush() -> None:
        chunk = list(run)
        while chunk and chunk[-1][1] == TAG_ADJ:
            chunk.pop()
        if chunk:
            phrases.append(NounPhrase(tuple(word for word, _ in chunk)))

    for word, tag in zip(words, tags):
        if tag in _CHUNK_TAGS:
            run.append((word, tag))
        else:
            flush()
            run = []
    flush()
    return phrases


def get_concepts(
    store: ConceptStore,
    nq: NounPhrase,
    memo: dict[tuple[str, ...], frozenset[Concept]] | None = None,
) -> frozenset[Concept]:
    """Maximum match: try the whole phrase, else recurse on both
    (n-1)-word subphrases (drop last word / drop first word) and union.

    The memo caches results per word tuple so each distinct contiguous
    subphrase is searched at most once.
    """
    if memo is None:
        memo = {}
    return _get_concepts(store, nq.words, memo)


def _get_concepts(
    store: ConceptStore,
    words: tuple[str, ...],
    memo: dict[tuple[str, ...], frozenset[Concept]],
) -> frozenset[Concept]:
    cached = memo.get(words)
    if cached is not None:
        return cached
    hit = concept_search(store, " ".join(words))
    if hit is not None:
        result = frozenset([hit])
    elif len(words) == 1:
        result = frozenset()
    else:
        left = _get_concepts(store, words[:-1], memo)
        right = _get_concepts(store, words[1:], memo)
        result = left | right
    memo[words] = result
    return result
