"""Run-file scoring: average precision, precision at N, paired t-tests.

Judgments use the three-point scale 0/1/2. "allrel" counts grade >= 1 as
relevant, "highrel" grade >= 2. Topics with no relevant document at the
active threshold are excluded from the means. Unjudged documents count
as irrelevant.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from scipy import stats as _scipy_stats

from .retrieval import RankedList

MODES = {"allrel": 1, "highrel": 2}
DEFAULT_CUTOFF = 1000


@dataclass
class Qrels:
    judgments: dict[tuple[str, str], int]

    def __post_init__(self) -> None:
        bad = {g for g in self.judgments.values() if g not in (0, 1, 2)}
        if bad:
            raise ValueError(f"grades must be 0, 1 or 2; found {sorted(bad)}")

    @classmethod
    def load(cls, path: str | Path) -> "Qrels":
        judgments: dict[tuple[str, str], int] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                parts = line.split()
                if len(parts) != 4:
                    raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(parts)}")
                topic_id, _, doc_id, grade = parts
                try:
                    judgments[(topic_id, doc_id)] = int(grade)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: bad grade {grade!r}") from None
        return cls(judgments)

    def grade(self, topic_id: str, doc_id: str) -> int:
        return self.judgments.get((topic_id, doc_id), 0)

    def relevant_count(self, topic_id: str, threshold: int = 1) -> int:
        return sum(
            1
            for (tid, _), grade in self.judgments.items()
            if tid == topic_id and grade >= threshold
        )

    def topics(self) -> set[str]:
        return {tid for tid, _ in self.judgments}


def average_precision(
    ranked: RankedList,
    qrels: Qrels,
    topic_id: str,
    relevance_threshold: int = 1,
    cutoff: int = DEFAULT_CUTOFF,
) -> float:
    """AP over the top ``cutoff`` entries, normalized by the number of
    relevant documents in the judgments. Errors if the topic has none."""
    total_relevant = qrels.relevant_count(topic_id, relevance_threshold)
    if total_relevant == 0:
        raise ValueError(f"topic {topic_id!r} has no relevant documents at threshold "
                         f"{relevance_threshold}")
    hits = 0
    precision_sum = 0.0
    for rank, (doc_id, _) in enumerate(ranked.entries[:cutoff], start=1):
        if qrels.grade(topic_id, doc_id) >= relevance_threshold:
            hits += 1
            precision_sum += hits / rank
    return precision_sum / total_relevant


def precision_at_n(
    ranked: RankedList,
    qrels: Qrels,
    topic_id: str,
    n: int,
    relevance_threshold: int = 1,
) -> float:
    """Fraction of relevant docs in the top n; short lists pad as irrelevant."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    hits = sum(
        1
        for doc_id, _ in ranked.entries[:n]
        if qrels.grade(topic_id, doc_id) >= relevance_threshold
    )
    return hits / n


def paired_t_test(scores_a: Sequence[float], scores_b: Sequence[float]) -> tuple[float, float]:
    """Paired two-tailed t-test over aligned per-topic scores.

    Returns (t, p) with df = n - 1. All-zero differences give (0, 1).
    """
    if len(scores_a) != len(scores_b):
        raise ValueError(
            f"score vectors must align: {len(scores_a)} vs {len(scores_b)} topics"
        )
    if len(scores_a) < 2:
        raise ValueError("need at least two topics for a paired t-test")
    diffs = [a - b for a, b in zip(scores_a, scores_b)]
    n = len(diffs)
    mean = math.fsum(diffs) / n
    var = math.fsum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        if mean == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean / math.sqrt(var / n)
    p = 2.0 * float(_scipy_stats.t.sf(abs(t), n - 1))
    return t, p


@dataclass
class TopicEval:
    ap: float
    p_at: dict[int, float] = field(default_factory=dict)


@dataclass
class EvalReport:
    mode: str
    per_topic: dict[str, TopicEval]
    excluded_topics: list[str]
    map_score: float
    p_at_n: dict[int, float]

    def to_json(self) -> str:
        payload = {
            "mode": self.mode,
            "map": self.map_score,
            "p_at_n": {str(n): v for n, v in self.p_at_n.items()},
            "topics": {
                tid: {"ap": te.ap, "p_at_n": {str(n): v for n, v in te.p_at.items()}}
                for tid, te in sorted(self.per_topic.items())
            },
            "excluded_topics": sorted(self.excluded_topics),
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def render_table(self) -> str:
        ns = sorted(self.p_at_n)
        header = ["topic", "AP"] + [f"P@{n}" for n in ns]
        rows = [header]
        for tid in sorted(self.per_topic):
            te = self.per_topic[tid]
            rows.append([tid, f"{te.ap:.4f}"] + [f"{te.p_at[n]:.4f}" for n in ns])
        rows.append(["all", f"{self.map_score:.4f}"] + [f"{self.p_at_n[n]:.4f}" for n in ns])
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        if self.excluded_topics:
            lines.append(f"excluded (no relevant docs): {' '.join(sorted(self.excluded_topics))}")
        return "\n".join(lines)


def parse_run(path: str | Path) -> dict[str, list[tuple[str, float]]]:
    """Read a TREC run file into per-topic (doc id, score) lists.

    A malformed line is fatal and reported with its line number.
    """
    by_topic: dict[str, list[tuple[str, float]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 fields, got {len(parts)}")
            topic_id, _, doc_id, _, score, _ = parts
            try:
                value = float(score)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad score {score!r}") from None
            by_topic.setdefault(topic_id, []).append((doc_id, value))
    return by_topic


def evaluate_run(
    run_path: str | Path,
    qrels: Qrels,
    mode: str = "allrel",
    n_values: Sequence[int] = (30,),
    cutoff: int = DEFAULT_CUTOFF,
) -> EvalReport:
    """Score a run file. Entries are re-sorted by (descending score,
    ascending doc id) to guard against upstream ordering bugs."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {sorted(MODES)}, got {mode!r}")
    threshold = MODES[mode]

    by_topic = parse_run(run_path)
    per_topic: dict[str, TopicEval] = {}
    excluded: list[str] = []
    for topic_id in sorted(by_topic):
        entries = sorted(by_topic[topic_id], key=lambda e: (-e[1], e[0]))
        ranked = RankedList(topic_id, entries)
        if qrels.relevant_count(topic_id, threshold) == 0:
            excluded.append(topic_id)
            continue
        ap = average_precision(ranked, qrels, topic_id, threshold, cutoff)
        p_at = {n: precision_at_n(ranked, qrels, topic_id, n, threshold) for n in n_values}
        per_topic[topic_id] = TopicEval(ap, p_at)

    if per_topic:
        map_score = math.fsum(te.ap for te in per_topic.values()) / len(per_topic)
        p_at_n = {
            n: math.fsum(te.p_at[n] for te in per_topic.values()) / len(per_topic)
            for n in n_values
        }
    else:
        map_score = 0.0
        p_at_n = {n: 0.0 for n in n_values}
    return EvalReport(mode, per_topic, excluded, map_score, p_at_n)
