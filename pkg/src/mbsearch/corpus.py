"""Corpus ingestion and text preprocessing.

Raw records are one JSON object per line with keys ``id`` (string),
``text`` (string), ``post_time`` (number, fractional days) and optional
``url_titles`` (array of strings). Unknown keys are ignored.

Preprocessing applies, in order: retweet rejection, the optional
English-likeness filter, tokenization, stopword removal (surface forms,
before stemming) and Porter stemming. Titles of embedded URLs are merged
into the same term-count bag as the tweet text.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .porter import porter_stem

logger = logging.getLogger(__name__)

REJECT_RETWEET = "retweet"
REJECT_NON_ENGLISH = "non_english"
REJECT_EMPTY = "empty_after_preprocess"

_ASCII_LETTER_MIN_FRACTION = 0.8


@dataclass
class RawTweet:
    """A raw input record: unprocessed text plus its post time in fractional days."""

    id: str
    text: str
    post_time: float
    url_titles: list[str] = field(default_factory=list)


@dataclass
class Document:
    """A preprocessed document: stemmed term counts and the post time."""

    id: str
    term_counts: dict[str, int]
    length: int
    post_time: float


@dataclass
class Rejected:
    """Outcome for a record dropped by preprocessing."""

    id: str
    reason: str


@dataclass
class PreprocessConfig:
    stopword_list: frozenset[str] = field(default_factory=frozenset)
    retweet_prefix: str = "RT"
    english_filter: str = "off"  # "off" | "heuristic"
    merge_url_titles: bool = True

    def __post_init__(self) -> None:
        if self.english_filter not in ("off", "heuristic"):
            raise ValueError(f"unknown english_filter mode: {self.english_filter!r}")
        self.stopword_list = frozenset(self.stopword_list)


def default_stopwords() -> frozenset[str]:
    """The bundled stopword list (lowercase surface forms, one per line)."""
    text = resources.files("mbsearch.data").joinpath("stopwords.txt").read_text("utf-8")
    return _parse_stopwords(text)


def load_stopwords(path: str | Path) -> frozenset[str]:
    return _parse_stopwords(Path(path).read_text("utf-8"))


def _parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def tokenize(text: str) -> list[str]:
    """Split on whitespace, strip edge punctuation, lowercase.

    Empty results and bare URLs (tokens beginning with "http") are
    dropped. Stripping the edges removes "@" from mentions and "#" from
    hashtags while keeping the mention/hashtag text.
    """
    tokens = []
    for raw in text.split():
        i, j = 0, len(raw)
        while i < j and not raw[i].isalnum():
            i += 1
        while j > i and not raw[j - 1].isalnum():
            j -= 1
        tok = raw[i:j].lower()
        if not tok or tok.startswith("http"):
            continue
        tokens.append(tok)
    return tokens


def _looks_english(text: str) -> bool:
    letters = [ch for ch in text if ch.isalpha()]
    if not letters:
        return True
    ascii_letters = sum(1 for ch in letters if ch.isascii())
    return ascii_letters / len(letters) >= _ASCII_LETTER_MIN_FRACTION


def preprocess(raw: RawTweet, cfg: PreprocessConfig) -> Document | Rejected:
    """Turn a raw record into a Document, or reject it with a reason."""
    if raw.text.lstrip().startswith(cfg.retweet_prefix):
        return Rejected(raw.id, REJECT_RETWEET)
    if cfg.english_filter == "heuristic" and not _looks_english(raw.text):
        return Rejected(raw.id, REJECT_NON_ENGLISH)

    pieces = [raw.text]
    if cfg.merge_url_titles:
        pieces.extend(raw.url_titles)

    counts: Counter[str] = Counter()
    for piece in pieces:
        for tok in tokenize(piece):
            if tok in cfg.stopword_list:
                continue
            counts[porter_stem(tok)] += 1

    if not counts:
        return Rejected(raw.id, REJECT_EMPTY)
    return Document(
        id=raw.id,
        term_counts=dict(counts),
        length=sum(counts.values()),
        post_time=raw.post_time,
    )


class CorpusReader:
    """Lazy single-pass iterator over a corpus file.

    Malformed lines are skipped; the running count is available as
    ``.skipped`` and is logged once the file is exhausted.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.skipped = 0

    def __iter__(self) -> Iterator[RawTweet]:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                record = self._parse_line(line, lineno)
                if record is not None:
                    yield record
        if self.skipped:
            logger.warning("%s: skipped %d malformed line(s)", self.path, self.skipped)

    def _parse_line(self, line: str, lineno: int) -> RawTweet | None:
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record is not an object")
            doc_id = obj["id"]
            text = obj["text"]
            post_time = obj["post_time"]
            url_titles = obj.get("url_titles", [])
            if not isinstance(doc_id, str) or not doc_id:
                raise ValueError("id must be a non-empty string")
            if not isinstance(text, str):
                raise ValueError("text must be a string")
            if isinstance(post_time, bool) or not isinstance(post_time, (int, float)):
                raise ValueError("post_time must be a number")
            post_time = float(post_time)
            if not math.isfinite(post_time) or post_time < 0:
                raise ValueError("post_time must be finite and non-negative")
            if not (isinstance(url_titles, list) and all(isinstance(t, str) for t in url_titles)):
                raise ValueError("url_titles must be an array of strings")
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            self.skipped += 1
            logger.debug("%s:%d: skipping malformed line (%s)", self.path, lineno, exc)
            return None
        return RawTweet(id=doc_id, text=text, post_time=post_time, url_titles=list(url_titles))


def load_corpus(path: str | Path) -> CorpusReader:
    """Open a corpus file for iteration. Raises OSError if unreadable."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"corpus file not found: {path}")
    return CorpusReader(path)
