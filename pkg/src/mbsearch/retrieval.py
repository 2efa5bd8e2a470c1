"""Query model estimation and negative-KL-divergence ranking.

Documents are ranked by sum_w P(w|query model) * log P(w|doc model),
which is rank-equivalent to negative KL divergence between the two
models. Only documents posted strictly before the query time are
eligible: future evidence is never consulted.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .index import Index, SmoothingParams

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 1000

_SUM_TOL = 1e-9


@dataclass
class LanguageModel:
    """Sparse distribution over terms; strictly positive, sums to 1."""

    probs: dict[str, float]

    def __post_init__(self) -> None:
        if not self.probs:
            raise ValueError("a language model needs at least one term")
        if any(p <= 0 for p in self.probs.values()):
            raise ValueError("language model probabilities must be positive")
        total = math.fsum(self.probs.values())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"language model sums to {total}, expected 1")

    def __getitem__(self, term: str) -> float:
        return self.probs.get(term, 0.0)

    def __iter__(self):
        return iter(self.probs)


@dataclass
class Topic:
    id: str
    query_text: str
    query_time: float


@dataclass
class RankedList:
    """Scored results for one topic, best first, ties by ascending doc id."""

    topic_id: str
    entries: list[tuple[str, float]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def doc_ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.entries]

    def top(self, k: int) -> "RankedList":
        return RankedList(self.topic_id, self.entries[:k])


def mle_query_model(terms: list[str]) -> LanguageModel:
    """Maximum-likelihood model over a token list: P(w) = count(w)/len."""
    if not terms:
        raise ValueError("cannot estimate a query model from no terms")
    n = len(terms)
    counts = Counter(terms)
    return LanguageModel({term: count / n for term, count in counts.items()})


def _scorable_terms(qm: Mapping[str, float], index: Index) -> tuple[dict[str, float], list[str]]:
    """Split query-model terms into scorable and skipped (zero collection mass)."""
    usable: dict[str, float] = {}
    skipped: list[str] = []
    for term, weight in qm.items():
        if weight <= 0:
            continue
        if index.collection_prob(term) > 0:
            usable[term] = weight
        else:
            skipped.append(term)
    return usable, sorted(skipped)


def kl_score(qm: LanguageModel, doc_id: str, index: Index, smoothing: SmoothingParams) -> float:
    """Cross-entropy score of one document under the query model.

    Terms with zero collection probability contribute an undefined
    logarithm; they are skipped and logged.
    """
    usable, skipped = _scorable_terms(qm.probs, index)
    if skipped:
        logger.debug("kl_score: skipped out-of-collection terms: %s", " ".join(skipped))
    score = 0.0
    for term, weight in usable.items():
        score += weight * math.log(index.doc_prob(doc_id, term, smoothing))
    if not usable:
        index.doc_term_counts(doc_id)  # still reject unknown documents
    return score


def query_likelihood(
    query_terms: list[str], doc_id: str, index: Index, smoothing: SmoothingParams
) -> float:
    """Product of smoothed per-term document probabilities, via log space."""
    log_total = 0.0
    for term in query_terms:
        p = index.doc_prob(doc_id, term, smoothing)
        if p == 0.0:
            return 0.0
        log_total += math.log(p)
    return math.exp(log_total)


def search(
    index: Index,
    qm: LanguageModel,
    query_time: float,
    depth: int = DEFAULT_DEPTH,
    smoothing: SmoothingParams | None = None,
    topic_id: str = "",
) -> RankedList:
    """Rank time-eligible documents by KL score, keeping the top `depth`.

    Candidates are the union of posting lists of query-model terms with
    positive collection probability: documents matching none of them
    carry only smoothing mass and are left out.
    """
    smoothing = smoothing or SmoothingParams()
    usable, skipped = _scorable_terms(qm.probs, index)
    if skipped:
        logger.warning(
            "query %s: terms absent from the collection were skipped: %s",
            topic_id or "<anonymous>",
            " ".join(skipped),
        )
    if not usable:
        return RankedList(topic_id)

    candidates: set[str] = set()
    for term in usable:
        for doc_id, _ in index.postings.get(term, ()):
            if index.doc_table[doc_id].post_time < query_time:
                candidates.add(doc_id)

    scored = []
    for doc_id in candidates:
        info = index.doc_table[doc_id]
        counts = index.doc_term_counts(doc_id)
        denom = info.length + smoothing.mu
        score = 0.0
        for term, weight in usable.items():
            p = (counts.get(term, 0) + smoothing.mu * index.collection_prob(term)) / denom
            score += weight * math.log(p)
        scored.append((doc_id, score))

    scored.sort(key=lambda entry: (-entry[1], entry[0]))
    return RankedList(topic_id, scored[:depth])


def format_run_line(topic_id: str, doc_id: str, rank: int, score: float, tag: str) -> str:
    return f"{topic_id} Q0 {doc_id} {rank} {score:.6f} {tag}"


def write_run(ranked_lists: Iterable[RankedList], tag: str) -> str:
    """Render ranked lists in TREC run format (rank starts at 1)."""
    lines = []
    for ranked in ranked_lists:
        for rank, (doc_id, score) in enumerate(ranked.entries, start=1):
            lines.append(format_run_line(ranked.topic_id, doc_id, rank, score, tag))
    return "\n".join(lines) + ("\n" if lines else "")
