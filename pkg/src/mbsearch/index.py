"""Immutable inverted index with collection/document language models
and the exponential recency prior over document age.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .corpus import Document


@dataclass
class SmoothingParams:
    """Dirichlet pseudo-count for document model estimation."""

    mu: float = 100.0

    def __post_init__(self) -> None:
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")


class DocInfo(NamedTuple):
    length: int
    post_time: float


class DuplicateDocumentError(ValueError):
    pass


class Index:
    """Read-only posting lists plus collection statistics.

    Postings are sorted by doc id so that scoring order is deterministic.
    Instances are safe to share across concurrent readers once built.
    """

    def __init__(
        self,
        postings: dict[str, list[tuple[str, int]]],
        doc_table: dict[str, DocInfo],
        collection_counts: dict[str, int],
        collection_length: int,
        doc_counts: dict[str, dict[str, int]],
    ):
        self.postings = postings
        self.doc_table = doc_table
        self.collection_counts = collection_counts
        self.collection_length = collection_length
        self._doc_counts = doc_counts

    @property
    def vocabulary(self) -> set[str]:
        return set(self.collection_counts)

    def __len__(self) -> int:
        return len(self.doc_table)

    def doc_term_counts(self, doc_id: str) -> dict[str, int]:
        try:
            return self._doc_counts[doc_id]
        except KeyError:
            raise KeyError(f"unknown document id: {doc_id!r}") from None

    def collection_prob(self, term: str) -> float:
        """Maximum-likelihood collection probability; 0 for unseen terms."""
        if self.collection_length == 0:
            raise ValueError("collection_prob is undefined on an empty index")
        return self.collection_counts.get(term, 0) / self.collection_length

    def doc_prob(self, doc_id: str, term: str, smoothing: SmoothingParams) -> float:
        """Dirichlet-smoothed document model probability."""
        count = self.doc_term_counts(doc_id).get(term, 0)
        length = self.doc_table[doc_id].length
        mu = smoothing.mu
        return (count + mu * self.collection_prob(term)) / (length + mu)


def build_index(docs: Iterable[Document]) -> Index:
    """Build an Index from preprocessed documents; duplicate ids are fatal."""
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_table: dict[str, DocInfo] = {}
    collection_counts: dict[str, int] = {}
    doc_counts: dict[str, dict[str, int]] = {}
    collection_length = 0

    for doc in docs:
        if doc.id in doc_table:
            raise DuplicateDocumentError(f"duplicate document id: {doc.id!r}")
        doc_table[doc.id] = DocInfo(doc.length, doc.post_time)
        doc_counts[doc.id] = dict(doc.term_counts)
        collection_length += doc.length
        for term, count in doc.term_counts.items():
            postings.setdefault(term, []).append((doc.id, count))
            collection_counts[term] = collection_counts.get(term, 0) + count

    for plist in postings.values():
        plist.sort(key=lambda entry: entry[0])

    return Index(postings, doc_table, collection_counts, collection_length, doc_counts)


def temporal_prior(query_time: float, post_time: float, rate: float) -> float:
    """Exponential recency density r * exp(-r * age).

    The document must strictly predate the query: scoring anything posted
    at or after query_time would leak future evidence.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if post_time >= query_time:
        raise ValueError(
            f"document time {post_time} is not before query time {query_time}"
        )
    return rate * math.exp(-rate * (query_time - post_time))


def save_index(index: Index, path: str | Path, meta: dict | None = None) -> None:
    """Write a snapshot that round-trips to identical counts.

    ``meta`` is an optional JSON-serializable blob (e.g. the preprocessing
    settings the index was built with) stored alongside the postings.
    """
    payload = {
        "format": "mbsearch-index",
        "version": 1,
        "meta": dict(meta or {}),
        "docs": [
            {
                "id": doc_id,
                "post_time": info.post_time,
                "counts": index.doc_term_counts(doc_id),
            }
            for doc_id, info in sorted(index.doc_table.items())
        ],
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_snapshot(path: str | Path) -> tuple[Index, dict]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != "mbsearch-index":
        raise ValueError(f"{path}: not an index snapshot")
    docs = [
        Document(
            id=entry["id"],
            term_counts={t: int(c) for t, c in entry["counts"].items()},
            length=sum(int(c) for c in entry["counts"].values()),
            post_time=float(entry["post_time"]),
        )
        for entry in payload["docs"]
    ]
    return build_index(docs), payload.get("meta", {})


def load_index(path: str | Path) -> Index:
    return load_snapshot(path)[0]
