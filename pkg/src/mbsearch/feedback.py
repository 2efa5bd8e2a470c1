"""Model-based pseudo-relevance feedback via a two-component mixture.

Feedback documents are assumed generated by mixing an unknown feedback
model with the collection model at a fixed noise weight. The feedback
model is fit by EM on the pooled term counts of the top-ranked
documents, truncated to its strongest terms, and interpolated into the
query model.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field

from .expansion import interpolate
from .index import Index
from .retrieval import LanguageModel, RankedList


@dataclass
class FeedbackParams:
    beta: float = 0.6
    lam: float = 0.5
    fb_docs: int = 7
    fb_terms: int = 5
    max_iters: int = 50
    tol: float = 1e-6

    def __post_init__(self) -> None:
        if not 0 <= self.beta <= 1:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if not 0 < self.lam < 1:
            raise ValueError(f"lambda must be in (0, 1), got {self.lam}")
        if self.fb_docs < 1:
            raise ValueError(f"fb_docs must be at least 1, got {self.fb_docs}")
        if self.fb_terms < 1:
            raise ValueError(f"fb_terms must be at least 1, got {self.fb_terms}")


@dataclass
class EMResult:
    """Fitted feedback model plus the fitting trace."""

    model: LanguageModel
    full_model: LanguageModel
    iterations: int
    log_likelihoods: list[float] = field(default_factory=list)

    @property
    def final_loglik(self) -> float:
        return self.log_likelihoods[-1]


def feedback_loglik(
    theta_f: Mapping[str, float],
    counts: Mapping[str, float],
    collection_probs: Mapping[str, float],
    lam: float,
) -> float:
    """Log-likelihood of the feedback counts under the mixture."""
    total = 0.0
    for term, count in counts.items():
        p = (1.0 - lam) * theta_f.get(term, 0.0) + lam * collection_probs.get(term, 0.0)
        if p <= 0.0:
            raise ValueError(
                f"term {term!r} has zero probability under both mixture components"
            )
        total += count * math.log(p)
    return total


def em_fit(
    counts: Mapping[str, float],
    collection_probs: Mapping[str, float],
    params: FeedbackParams,
) -> EMResult:
    """Fit the feedback model by EM from a uniform start.

    Iterates until the log-likelihood change drops below ``tol`` or the
    iteration cap is hit, then truncates to the ``fb_terms`` most probable
    terms (ties by ascending term) and renormalizes.
    """
    if not counts:
        raise ValueError("cannot fit a feedback model from empty counts")
    for term in counts:
        if collection_probs.get(term, 0.0) <= 0.0:
            raise ValueError(
                f"feedback term {term!r} has no collection probability; "
                "the mixture is undefined for injected vocabulary"
            )

    terms = sorted(counts)
    theta = {term: 1.0 / len(terms) for term in terms}
    lam = params.lam
    loglik = feedback_loglik(theta, counts, collection_probs, lam)
    trace = [loglik]
    iterations = 0

    for _ in range(params.max_iters):
        posterior = {}
        for term in terms:
            signal = (1.0 - lam) * theta[term]
            posterior[term] = signal / (signal + lam * collection_probs[term])
        weighted = {term: counts[term] * posterior[term] for term in terms}
        total = sum(weighted.values())
        theta = {term: weighted[term] / total for term in terms}
        iterations += 1

        new_loglik = feedback_loglik(theta, counts, collection_probs, lam)
        trace.append(new_loglik)
        if abs(new_loglik - loglik) < params.tol:
            break
        loglik = new_loglik

    full_model = LanguageModel(dict(theta))
    kept = sorted(terms, key=lambda t: (-theta[t], t))[: params.fb_terms]
    mass = sum(theta[t] for t in kept)
    model = LanguageModel({t: theta[t] / mass for t in kept})
    return EMResult(model, full_model, iterations, trace)


def fit_feedback_model(
    ranked: RankedList, index: Index, params: FeedbackParams
) -> EMResult | None:
    """Fit the mixture on the pooled counts of the top fb_docs entries.

    Returns None for an empty ranked list (nothing to learn from).
    """
    if not ranked.entries:
        return None
    counts: Counter[str] = Counter()
    for doc_id, _ in ranked.entries[: params.fb_docs]:
        counts.update(index.doc_term_counts(doc_id))
    collection_probs = {term: index.collection_prob(term) for term in counts}
    return em_fit(counts, collection_probs, params)


def apply_feedback(
    theta_q1: LanguageModel,
    ranked: RankedList,
    index: Index,
    params: FeedbackParams,
) -> LanguageModel:
    """Update the query model from the top-ranked feedback documents.

    Feedback always runs when the ranked list is non-empty; an empty list
    leaves the query model unchanged.
    """
    result = fit_feedback_model(ranked, index, params)
    if result is None:
        return theta_q1
    return interpolate(theta_q1, result.model, params.beta)
