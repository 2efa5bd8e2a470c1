"""Language-model retrieval for short timestamped documents: KL-divergence
ranking with knowledge-based query expansion, recency-aware term selection,
mixture-model feedback, and a TREC-style evaluation harness."""

__version__ = "0.1.0"

from .corpus import (
    Document,
    PreprocessConfig,
    RawTweet,
    Rejected,
    default_stopwords,
    load_corpus,
    preprocess,
    tokenize,
)
from .expansion import ExpansionParams, ScoredTerm, build_knowledge_query, interpolate
from .feedback import EMResult, FeedbackParams, apply_feedback, em_fit, feedback_loglik
from .index import Index, SmoothingParams, build_index, load_index, save_index, temporal_prior
from .knowledge import (
    Concept,
    ConceptStore,
    LexiconTagger,
    NounPhrase,
    concept_search,
    detect_noun_phrases,
    get_concepts,
    load_concept_store,
)
from .pipeline import SystemConfig, run_topic, run_topics
from .porter import porter_stem
from .retrieval import (
    LanguageModel,
    RankedList,
    Topic,
    kl_score,
    mle_query_model,
    query_likelihood,
    search,
    write_run,
)
from .evaluation import (
    EvalReport,
    Qrels,
    average_precision,
    evaluate_run,
    paired_t_test,
    precision_at_n,
)

__all__ = [
    "Concept",
    "ConceptStore",
    "Document",
    "EMResult",
    "EvalReport",
    "ExpansionParams",
    "FeedbackParams",
    "Index",
    "LanguageModel",
    "LexiconTagger",
    "NounPhrase",
    "PreprocessConfig",
    "Qrels",
    "RankedList",
    "RawTweet",
    "Rejected",
    "ScoredTerm",
    "SmoothingParams",
    "SystemConfig",
    "Topic",
    "apply_feedback",
    "average_precision",
    "build_index",
    "build_knowledge_query",
    "concept_search",
    "default_stopwords",
    "detect_noun_phrases",
    "em_fit",
    "evaluate_run",
    "feedback_loglik",
    "get_concepts",
    "interpolate",
    "kl_score",
    "load_concept_store",
    "load_corpus",
    "load_index",
    "mle_query_model",
    "paired_t_test",
    "porter_stem",
    "precision_at_n",
    "preprocess",
    "query_likelihood",
    "run_topic",
    "run_topics",
    "save_index",
    "search",
    "temporal_prior",
    "tokenize",
    "write_run",
]
