import json
import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mbsearch.corpus import (
    REJECT_EMPTY,
    REJECT_NON_ENGLISH,
    REJECT_RETWEET,
    Document,
    PreprocessConfig,
    RawTweet,
    Rejected,
    default_stopwords,
    load_corpus,
    load_stopwords,
    preprocess,
    tokenize,
)


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_plain_lowercase_split(self):
        assert tokenize("Mila Kunis in Oz movie") == ["mila", "kunis", "in", "oz", "movie"]

    def test_mentions_hashtags_urls(self):
        assert tokenize("@MellowAnniston: Happy #bday! http://t.co/x") == [
            "mellowanniston", "happy", "bday",
        ]

    def test_url_variants_dropped(self):
        assert tokenize("see https://x.co and (http://y.co)") == ["see", "and"]

    def test_interior_punctuation_kept(self):
        assert tokenize("don't stop a.b") == ["don't", "stop", "a.b"]

    def test_pure_punctuation_dropped(self):
        assert tokenize("!!! -- ...") == []

    @given(st.text(max_size=80))
    def test_idempotent_on_normalized_text(self, text):
        toks = tokenize(text)
        assert tokenize(" ".join(toks)) == toks

    @given(st.text(max_size=80))
    def test_output_is_normalized(self, text):
        for tok in tokenize(text):
            assert tok == tok.lower()
            assert not tok.startswith("http")
            assert tok[0].isalnum() and tok[-1].isalnum()


class TestPreprocess:
    def test_retweet_rejected(self, plain_cfg):
        out = preprocess(RawTweet("t", "RT great game", 1.0), plain_cfg)
        assert isinstance(out, Rejected) and out.reason == REJECT_RETWEET

    def test_retweet_rejected_after_leading_whitespace(self, plain_cfg):
        out = preprocess(RawTweet("t", "   RT again", 1.0), plain_cfg)
        assert isinstance(out, Rejected) and out.reason == REJECT_RETWEET

    def test_all_stopwords_rejected(self, plain_cfg):
        out = preprocess(RawTweet("t", "a the of", 1.0), plain_cfg)
        assert isinstance(out, Rejected) and out.reason == REJECT_EMPTY

    def test_url_title_merge(self, plain_cfg):
        out = preprocess(
            RawTweet("t", "wine industry", 2.0, ["Wine grape industry report"]),
            plain_cfg,
        )
        assert isinstance(out, Document)
        assert out.term_counts == {"wine": 2, "industri": 2, "grape": 1, "report": 1}
        assert out.length == 6
        assert out.post_time == 2.0

    def test_url_titles_ignored_when_disabled(self):
        cfg = PreprocessConfig(merge_url_titles=False)
        out = preprocess(RawTweet("t", "wine industry", 2.0, ["Wine grape report"]), cfg)
        assert out.term_counts == {"wine": 1, "industri": 1}

    def test_non_english_heuristic(self):
        cfg = PreprocessConfig(english_filter="heuristic")
        cyrillic = preprocess(RawTweet("t", "сегодня хорошая погода", 1.0), cfg)
        assert isinstance(cyrillic, Rejected) and cyrillic.reason == REJECT_NON_ENGLISH
        english = preprocess(RawTweet("t", "wine industry report", 1.0), cfg)
        assert isinstance(english, Document)

    def test_heuristic_threshold(self):
        cfg = PreprocessConfig(english_filter="heuristic")
        # 4 of 8 letters are ASCII: below the 0.8 cutoff
        mixed = preprocess(RawTweet("t", "wine пиво", 1.0), cfg)
        assert isinstance(mixed, Rejected)
        # digits and punctuation do not count as letters
        numeric = preprocess(RawTweet("t", "42 wine !!", 1.0), cfg)
        assert isinstance(numeric, Document)

    def test_filter_off_keeps_everything(self):
        cfg = PreprocessConfig(english_filter="off")
        assert isinstance(preprocess(RawTweet("t", "сегодня погода", 1.0), cfg), Document)

    def test_deterministic(self, plain_cfg):
        raw = RawTweet("t", "Wine industry growing fast", 3.0, ["Grape harvest"])
        assert preprocess(raw, plain_cfg) == preprocess(raw, plain_cfg)

    def test_bad_filter_mode_rejected(self):
        with pytest.raises(ValueError):
            PreprocessConfig(english_filter="always")

    @given(st.text(max_size=60), st.floats(min_value=0, max_value=100))
    def test_document_invariants(self, text, post_time):
        cfg = PreprocessConfig(stopword_list=frozenset({"the", "a"}))
        out = preprocess(RawTweet("t", text, post_time), cfg)
        if isinstance(out, Document):
            assert out.length == sum(out.term_counts.values())
            assert out.length >= 1
            assert all(t for t in out.term_counts)
            assert not text.lstrip().startswith("RT")
        else:
            assert out.reason in {REJECT_RETWEET, REJECT_EMPTY}


class TestLoadCorpus:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert list(load_corpus(path)) == []

    def test_round_trip_single_record(self, tmp_path):
        path = tmp_path / "one.jsonl"
        rec = {"id": "d1", "text": "hello world", "post_time": 1.25, "url_titles": ["Greetings"]}
        path.write_text(json.dumps(rec) + "\n")
        [tweet] = list(load_corpus(path))
        assert tweet == RawTweet("d1", "hello world", 1.25, ["Greetings"])

    def test_defaults_and_unknown_keys(self, tmp_path):
        path = tmp_path / "extra.jsonl"
        path.write_text(json.dumps({"id": "d1", "text": "x", "post_time": 0, "lang": "en"}) + "\n")
        [tweet] = list(load_corpus(path))
        assert tweet.url_titles == [] and tweet.post_time == 0.0

    def test_malformed_lines_skipped_and_counted(self, tmp_path):
        path = tmp_path / "mixed.jsonl"
        lines = [
            json.dumps({"id": "d1", "text": "one", "post_time": 1}),
            "{not json",
            json.dumps({"id": "d2", "text": "two", "post_time": 2}),
        ]
        path.write_text("\n".join(lines) + "\n")
        reader = load_corpus(path)
        tweets = list(reader)
        assert [t.id for t in tweets] == ["d1", "d2"]
        assert reader.skipped == 1

    @pytest.mark.parametrize("record", [
        {"text": "no id", "post_time": 1},
        {"id": "", "text": "empty id", "post_time": 1},
        {"id": "d", "post_time": 1},
        {"id": "d", "text": "t"},
        {"id": "d", "text": "t", "post_time": -1},
        {"id": "d", "text": "t", "post_time": float("nan")},
        {"id": "d", "text": "t", "post_time": True},
        {"id": "d", "text": "t", "post_time": 1, "url_titles": "not-a-list"},
        {"id": 7, "text": "t", "post_time": 1},
    ])
    def test_invalid_records_skipped(self, tmp_path, record):
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(record) + "\n")
        reader = load_corpus(path)
        assert list(reader) == []
        assert reader.skipped == 1

    def test_missing_file_is_fatal(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_corpus(tmp_path / "nope.jsonl")

    def test_skip_warning_logged(self, tmp_path, caplog):
        path = tmp_path / "warn.jsonl"
        path.write_text("junk\n")
        with caplog.at_level(logging.WARNING, logger="mbsearch.corpus"):
            list(load_corpus(path))
        assert "skipped 1 malformed line" in caplog.text


class TestStopwords:
    def test_default_list_is_lowercase_and_nonempty(self):
        words = default_stopwords()
        assert len(words) > 200
        assert all(w == w.lower() for w in words)
        assert {"the", "of", "and", "in"} <= words

    def test_load_custom_file(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# comment\nThe\nAND\n\nof\n")
        assert load_stopwords(path) == frozenset({"the", "and", "of"})
