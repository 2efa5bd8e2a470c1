"""Knowledge-query construction and interpolation with the original query.

Meta properties of matched concepts (name, aliases, notable_for,
notable_types) enter the knowledge query directly. Long-text properties
(description, domain-specific) are mined with an association score over
the pseudo-relevance documents of the ORIGINAL query:

    score(w) = sum_D P(D) * P(w|D) * prod_i P(q_i|D)

where P(D) is the recency prior normalized over the PRD set (uniform
when no rate is given) and the P(.|D) are Dirichlet-smoothed.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .corpus import PreprocessConfig, porter_stem, tokenize
from .index import Index, SmoothingParams, temporal_prior
from .knowledge import Concept
from .retrieval import LanguageModel, RankedList

logger = logging.getLogger(__name__)


@dataclass
class ExpansionParams:
    """Knowledge-expansion knobs. ``k=None`` keeps every term with a
    positive association score."""

    alpha: float = 0.5
    k: int | None = 5
    n: int = 100
    r: float = 0.1

    def __post_init__(self) -> None:
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.k is not None and self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k}")
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")


@dataclass
class ScoredTerm:
    term: str
    score: float


def _preprocess_text(text: str, cfg: PreprocessConfig) -> list[str]:
    return [
        porter_stem(tok)
        for tok in tokenize(text)
        if tok not in cfg.stopword_list
    ]


def meta_terms(concept: Concept, cfg: PreprocessConfig) -> list[str]:
    """Preprocessed tokens of the concise meta properties, multiplicity kept."""
    text = " ".join(
        [concept.name, *concept.aliases, *concept.notable_for, *concept.notable_types]
    )
    return _preprocess_text(text, cfg)


def candidate_terms(concept: Concept, cfg: PreprocessConfig) -> list[str]:
    """Preprocessed tokens of description and domain properties."""
    text = " ".join([concept.description, *concept.domain_properties.values()])
    return _preprocess_text(text, cfg)


def normalized_priors(prd: RankedList, query_time: float, r: float | None, index: Index) -> dict[str, float]:
    """Document priors over the PRD set, summing to 1.

    With a rate, recent documents get exponentially more mass; without
    one the prior is uniform.
    """
    doc_ids = prd.doc_ids()
    if r is None:
        return {doc_id: 1.0 / len(doc_ids) for doc_id in doc_ids}
    raw = {
        doc_id: temporal_prior(query_time, index.doc_table[doc_id].post_time, r)
        for doc_id in doc_ids
    }
    total = sum(raw.values())
    return {doc_id: value / total for doc_id, value in raw.items()}


def score_candidates(
    candidates: Iterable[str],
    query_terms: Sequence[str],
    query_time: float,
    prd: RankedList,
    index: Index,
    r: float | None,
    smoothing: SmoothingParams,
) -> list[ScoredTerm]:
    """Association score for each candidate over the PRD set.

    Sorted by descending score, ties by ascending term. The PRD list must
    come from a search with the original query model at the query time.
    """
    if not prd.entries:
        raise ValueError("cannot score candidates with an empty PRD set")

    priors = normalized_priors(prd, query_time, r, index)
    likelihood = {
        doc_id: _query_likelihood(query_terms, doc_id, index, smoothing)
        for doc_id in priors
    }

    scored = []
    for term in sorted(set(candidates)):
        total = 0.0
        for doc_id, prior in priors.items():
            total += prior * index.doc_prob(doc_id, term, smoothing) * likelihood[doc_id]
        scored.append(ScoredTerm(term, total))
    scored.sort(key=lambda st: (-st.score, st.term))
    return scored


def _query_likelihood(
    query_terms: Sequence[str], doc_id: str, index: Index, smoothing: SmoothingParams
) -> float:
    value = 1.0
    for term in query_terms:
        value *= index.doc_prob(doc_id, term, smoothing)
    return value


def build_knowledge_query(
    concepts: Iterable[Concept],
    query_terms: Sequence[str],
    query_time: float,
    prd: RankedList,
    index: Index,
    params: ExpansionParams,
    cfg: PreprocessConfig,
    smoothing: SmoothingParams | None = None,
    temporal: bool = True,
    trace: dict | None = None,
) -> LanguageModel | None:
    """Uniform model over the distinct knowledge terms of all matched concepts.

    Candidate terms are pooled across concepts and the top-k positive
    scorers kept; meta terms of every concept are added unscored. Returns
    None when nothing matched or nothing survives selection. ``trace``,
    if given, is filled with the selection details.
    """
    smoothing = smoothing or SmoothingParams()
    concepts = sorted(concepts, key=lambda c: c.concept_id)
    if not concepts:
        return None

    meta: list[str] = []
    pooled: set[str] = set()
    for concept in concepts:
        meta.extend(meta_terms(concept, cfg))
        pooled.update(candidate_terms(concept, cfg))

    selected: list[ScoredTerm] = []
    if params.k != 0 and pooled and prd.entries:
        scored = score_candidates(
            pooled, query_terms, query_time, prd, index,
            params.r if temporal else None, smoothing,
        )
        positive = [st for st in scored if st.score > 0]
        selected = positive if params.k is None else positive[: params.k]
    elif pooled and not prd.entries:
        logger.warning("empty PRD set: falling back to meta terms only")

    terms = sorted(set(meta) | {st.term for st in selected})
    if trace is not None:
        trace["concepts"] = concepts
        trace["meta_terms"] = sorted(set(meta))
        trace["selected"] = selected
        trace["terms"] = terms
    if not terms:
        return None
    weight = 1.0 / len(terms)
    return LanguageModel({term: weight for term in terms})


def interpolate(base: LanguageModel, other: LanguageModel, weight: float) -> LanguageModel:
    """Convex combination (1-w)*base + w*other; zero-probability terms dropped."""
    if not 0 <= weight <= 1:
        raise ValueError(f"interpolation weight must be in [0, 1], got {weight}")
    combined: dict[str, float] = {}
    for term, p in base.probs.items():
        combined[term] = (1.0 - weight) * p
    for term, p in other.probs.items():
        combined[term] = combined.get(term, 0.0) + weight * p
    return LanguageModel({t: p for t, p in combined.items() if p > 0})
