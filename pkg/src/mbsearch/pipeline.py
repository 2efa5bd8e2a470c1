"""Per-topic wiring of the retrieval variants.

    simplekl   plain KL ranking with the maximum-likelihood query model
    qesmm      mixture-model feedback on top of simplekl
    qefb       knowledge expansion (recency-weighted term selection)
    qefbnt     qefb with a uniform prior instead of the recency prior
    qefb_smm   qefb followed by mixture-model feedback

Every pseudo-relevance lookup along the way is gated to documents
posted strictly before the topic's query time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import TextIO

from .corpus import PreprocessConfig, porter_stem, tokenize
from .expansion import ExpansionParams, build_knowledge_query, interpolate
from .feedback import FeedbackParams, fit_feedback_model
from .index import Index, SmoothingParams
from .knowledge import Concept, ConceptStore, LexiconTagger, detect_noun_phrases, get_concepts
from .retrieval import LanguageModel, RankedList, Topic, mle_query_model, search

logger = logging.getLogger(__name__)

VARIANTS = ("simplekl", "qesmm", "qefb", "qefbnt", "qefb_smm")
_EXPANSION_VARIANTS = ("qefb", "qefbnt", "qefb_smm")
_FEEDBACK_VARIANTS = ("qesmm", "qefb_smm")

QESMM_BETA = 0.9


@dataclass
class SystemConfig:
    """All tunables of the pipeline, with the tuned defaults."""

    variant: str = "simplekl"
    mu: float = 100.0
    alpha: float = 0.5
    beta: float = 0.6
    k: int | None = 5
    n: int = 100
    r: float = 0.1
    lam: float = 0.5
    fb_docs: int = 7
    fb_terms: int = 5
    depth: int = 1000
    concept_override: dict[str, list[str]] | None = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @classmethod
    def for_variant(cls, variant: str, **overrides) -> "SystemConfig":
        """Defaults adjusted per variant (qesmm ships with beta=0.9)."""
        cfg = cls(variant=variant)
        if variant == "qesmm" and "beta" not in overrides:
            cfg = replace(cfg, beta=QESMM_BETA)
        return replace(cfg, **overrides) if overrides else cfg

    @property
    def smoothing(self) -> SmoothingParams:
        return SmoothingParams(self.mu)

    @property
    def expansion(self) -> ExpansionParams:
        return ExpansionParams(alpha=self.alpha, k=self.k, n=self.n, r=self.r)

    @property
    def feedback(self) -> FeedbackParams:
        return FeedbackParams(
            beta=self.beta, lam=self.lam,
            fb_docs=self.fb_docs, fb_terms=self.fb_terms,
        )


def preprocess_query(text: str, cfg: PreprocessConfig) -> list[str]:
    """Query terms get the same tokenize/stop/stem treatment as documents."""
    return [porter_stem(tok) for tok in tokenize(text) if tok not in cfg.stopword_list]


def resolve_concepts(
    topic: Topic,
    store: ConceptStore,
    tagger: LexiconTagger,
    override: dict[str, list[str]] | None = None,
) -> list[Concept]:
    """Concepts for a topic: noun-phrase detection plus maximum match,
    or the explicit per-topic override when one is configured."""
    if override is not None and topic.id in override:
        concepts = []
        for concept_id in override[topic.id]:
            concept = store.concepts.get(concept_id)
            if concept is None:
                raise ValueError(
                    f"concept override for topic {topic.id!r} names unknown id {concept_id!r}"
                )
            concepts.append(concept)
        return sorted(set(concepts), key=lambda c: c.concept_id)

    memo: dict = {}
    matched: set[Concept] = set()
    for phrase in detect_noun_phrases(topic.query_text, tagger):
        matched |= get_concepts(store, phrase, memo)
    return sorted(matched, key=lambda c: c.concept_id)


def run_topic(
    topic: Topic,
    index: Index,
    config: SystemConfig,
    preprocess_cfg: PreprocessConfig,
    store: ConceptStore | None = None,
    tagger: LexiconTagger | None = None,
    debug: TextIO | None = None,
) -> RankedList | None:
    """Rank documents for one topic; None when the query preprocesses to nothing."""
    terms = preprocess_query(topic.query_text, preprocess_cfg)
    if not terms:
        logger.warning("topic %s: query empty after preprocessing, skipped", topic.id)
        return None

    smoothing = config.smoothing
    theta_q = mle_query_model(terms)
    model = theta_q

    if config.variant in _EXPANSION_VARIANTS:
        if store is None:
            raise ValueError(f"variant {config.variant!r} needs a concept store")
        tagger = tagger or LexiconTagger.bundled()
        concepts = resolve_concepts(topic, store, tagger, config.concept_override)
        prd = search(index, theta_q, topic.query_time, depth=config.n,
                     smoothing=smoothing, topic_id=topic.id)
        trace: dict = {}
        theta_qfb = build_knowledge_query(
            concepts, terms, topic.query_time, prd, index,
            config.expansion, preprocess_cfg, smoothing,
            temporal=(config.variant != "qefbnt"), trace=trace,
        )
        if debug is not None:
            _dump_expansion(debug, topic, trace, theta_qfb)
        if theta_qfb is not None:
            model = interpolate(theta_q, theta_qfb, config.alpha)

    if config.variant in _FEEDBACK_VARIANTS:
        ranked = search(index, model, topic.query_time, depth=config.depth,
                        smoothing=smoothing, topic_id=topic.id)
        model = _feedback_step(model, ranked, index, config, topic, debug)

    return search(index, model, topic.query_time, depth=config.depth,
                  smoothing=smoothing, topic_id=topic.id)


def _feedback_step(
    model: LanguageModel,
    ranked: RankedList,
    index: Index,
    config: SystemConfig,
    topic: Topic,
    debug: TextIO | None,
) -> LanguageModel:
    result = fit_feedback_model(ranked, index, config.feedback)
    if result is None:
        if debug is not None:
            debug.write(f"topic {topic.id} feedback: empty ranked list, model unchanged\n")
        return model
    if debug is not None:
        debug.write(
            f"topic {topic.id} feedback: iterations={result.iterations} "
            f"loglik={result.final_loglik:.6f}\n"
        )
        for term in sorted(result.model.probs):
            debug.write(f"topic {topic.id} theta_f: {term} {result.model.probs[term]:.6f}\n")
    return interpolate(model, result.model, config.beta)


def _dump_expansion(debug: TextIO, topic: Topic, trace: dict, model: LanguageModel | None) -> None:
    concepts = trace.get("concepts", [])
    debug.write(
        f"topic {topic.id} concepts: "
        + (" | ".join(f"{c.concept_id} {c.name}" for c in concepts) or "<none>")
        + "\n"
    )
    debug.write(f"topic {topic.id} meta_terms: {' '.join(trace.get('meta_terms', []))}\n")
    for st in trace.get("selected", []):
        debug.write(f"topic {topic.id} knowledge_term: {st.term} {st.score:.6e}\n")
    if model is None:
        debug.write(f"topic {topic.id} theta_qfb: <none>\n")
    else:
        rendered = " ".join(f"{t}:{p:.6f}" for t, p in sorted(model.probs.items()))
        debug.write(f"topic {topic.id} theta_qfb: {rendered}\n")


def run_topics(
    topics: list[Topic],
    index: Index,
    config: SystemConfig,
    preprocess_cfg: PreprocessConfig,
    store: ConceptStore | None = None,
    tagger: LexiconTagger | None = None,
    debug: TextIO | None = None,
) -> list[RankedList]:
    """Run every topic in order, dropping ones that preprocess to nothing."""
    results = []
    for topic in topics:
        ranked = run_topic(topic, index, config, preprocess_cfg, store, tagger, debug)
        if ranked is not None:
            results.append(ranked)
    return results
