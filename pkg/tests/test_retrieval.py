import logging
import math
import random

import pytest

from mbsearch.corpus import Document
from mbsearch.index import SmoothingParams, build_index
from mbsearch.retrieval import (
    LanguageModel,
    RankedList,
    format_run_line,
    kl_score,
    mle_query_model,
    query_likelihood,
    search,
    write_run,
)
from reference import RefCollection, kl_score_full_vocab

MU100 = SmoothingParams(100)

# ln(26/102), the d1 score for query model {a: 1} on the two-doc fixture
SCORE_D1_A = -1.3668762752627890


def random_corpus(rng: random.Random, n_docs: int, vocab_size: int, max_len: int = 30):
    vocab = [f"w{i}" for i in range(vocab_size)]
    docs = []
    for i in range(n_docs):
        terms = rng.choices(vocab, k=rng.randint(1, max_len))
        counts = {}
        for t in terms:
            counts[t] = counts.get(t, 0) + 1
        docs.append(Document(f"d{i:04d}", counts, sum(counts.values()), rng.uniform(0, 30)))
    return docs


class TestLanguageModel:
    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            LanguageModel({"a": 0.5, "b": 0.4})

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            LanguageModel({"a": 1.5, "b": -0.5})

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            LanguageModel({})


class TestMleQueryModel:
    def test_single(self):
        assert mle_query_model(["a"]).probs == {"a": 1.0}

    def test_uniform_pair(self):
        assert mle_query_model(["a", "b"]).probs == {"a": 0.5, "b": 0.5}

    def test_count_ratio(self):
        model = mle_query_model(["a", "a", "b"])
        assert model["a"] == pytest.approx(2 / 3)
        assert model["b"] == pytest.approx(1 / 3)

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            mle_query_model([])


class TestKlScore:
    def test_frozen_example(self, two_doc_index):
        qm = mle_query_model(["a"])
        assert kl_score(qm, "d1", two_doc_index, MU100) == pytest.approx(
            SCORE_D1_A, abs=1e-12
        )

    def test_monotone_in_matching_count(self, two_doc_index):
        qm = mle_query_model(["a"])
        assert kl_score(qm, "d1", two_doc_index, MU100) > kl_score(
            qm, "d2", two_doc_index, MU100
        )

    def test_all_terms_skipped_scores_zero(self, two_doc_index, caplog):
        qm = mle_query_model(["nowhere"])
        with caplog.at_level(logging.DEBUG, logger="mbsearch.retrieval"):
            assert kl_score(qm, "d1", two_doc_index, MU100) == 0.0
        assert "nowhere" in caplog.text

    def test_unknown_doc_errors(self, two_doc_index):
        with pytest.raises(KeyError):
            kl_score(mle_query_model(["a"]), "ghost", two_doc_index, MU100)

    def test_matches_full_vocabulary_oracle(self):
        rng = random.Random(4711)
        docs = random_corpus(rng, n_docs=40, vocab_size=60)
        index = build_index(docs)
        coll = RefCollection({d.id: d.term_counts for d in docs})
        vocab = sorted(coll.vocab)
        for _ in range(15):
            terms = rng.choices(vocab, k=rng.randint(1, 6))
            qm = mle_query_model(terms)
            for doc in rng.sample(docs, 8):
                naive = kl_score_full_vocab(coll, qm.probs, doc.id, 100.0)
                fast = kl_score(qm, doc.id, index, MU100)
                assert fast == pytest.approx(naive, abs=1e-9)


class TestQueryLikelihood:
    def test_single_term(self, two_doc_index):
        assert query_likelihood(["a"], "d1", two_doc_index, MU100) == pytest.approx(
            26 / 102, abs=1e-12
        )

    def test_repeated_term_squares(self, two_doc_index):
        assert query_likelihood(["a", "a"], "d1", two_doc_index, MU100) == pytest.approx(
            (26 / 102) ** 2, abs=1e-12
        )

    def test_zero_factor_gives_zero(self, two_doc_index):
        assert query_likelihood(["a", "nowhere"], "d1", two_doc_index, MU100) == 0.0


class TestSearch:
    def test_time_gate_excludes_everything(self, two_doc_index):
        ranked = search(two_doc_index, mle_query_model(["a"]), query_time=0.0)
        assert ranked.entries == []

    def test_depth_one_example(self, two_doc_index):
        ranked = search(two_doc_index, mle_query_model(["a"]), query_time=1.0, depth=1)
        assert [d for d, _ in ranked.entries] == ["d1"]
        assert ranked.entries[0][1] == pytest.approx(SCORE_D1_A, abs=1e-12)

    def test_tie_break_by_doc_id(self):
        index = build_index([
            Document("z2", {"a": 1}, 1, 0.0),
            Document("a1", {"a": 1}, 1, 0.0),
        ])
        ranked = search(index, mle_query_model(["a"]), query_time=1.0)
        assert ranked.doc_ids() == ["a1", "z2"]

    def test_prefix_property(self):
        rng = random.Random(99)
        docs = random_corpus(rng, n_docs=60, vocab_size=20)
        index = build_index(docs)
        qm = mle_query_model(["w1", "w2", "w3"])
        full = search(index, qm, query_time=40.0, depth=50)
        for k in (1, 5, 20):
            assert search(index, qm, query_time=40.0, depth=k).entries == full.entries[:k]

    def test_scores_agree_with_kl_score(self):
        rng = random.Random(5)
        docs = random_corpus(rng, n_docs=30, vocab_size=15)
        index = build_index(docs)
        qm = mle_query_model(["w1", "w2"])
        for doc_id, score in search(index, qm, query_time=40.0).entries:
            assert score == kl_score(qm, doc_id, index, MU100)

    def test_gate_fuzz(self):
        rng = random.Random(271828)
        for _ in range(60):
            docs = random_corpus(rng, n_docs=rng.randint(1, 25), vocab_size=8)
            index = build_index(docs)
            query_time = rng.uniform(0, 35)
            terms = rng.choices([f"w{i}" for i in range(8)], k=rng.randint(1, 4))
            ranked = search(index, mle_query_model(terms), query_time)
            for doc_id, _ in ranked.entries:
                assert index.doc_table[doc_id].post_time < query_time

    def test_unmatchable_query_returns_empty(self, two_doc_index):
        ranked = search(two_doc_index, mle_query_model(["nowhere"]), query_time=5.0)
        assert ranked.entries == []

    def test_scores_non_increasing(self):
        rng = random.Random(7)
        docs = random_corpus(rng, n_docs=50, vocab_size=10)
        index = build_index(docs)
        ranked = search(index, mle_query_model(["w0", "w1"]), query_time=50.0)
        scores = [s for _, s in ranked.entries]
        assert scores == sorted(scores, reverse=True)


class TestRunFormat:
    def test_line_layout(self):
        line = format_run_line("T1", "d9", 3, -1.25, "tag")
        assert line == "T1 Q0 d9 3 -1.250000 tag"

    def test_write_run(self):
        ranked = RankedList("T1", [("d1", -1.0), ("d2", -2.0)])
        text = write_run([ranked], "sys")
        assert text == "T1 Q0 d1 1 -1.000000 sys\nT1 Q0 d2 2 -2.000000 sys\n"

    def test_write_run_empty(self):
        assert write_run([], "sys") == ""
