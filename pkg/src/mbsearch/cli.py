"""Command-line frontend: index building, batch runs, evaluation, sweeps.

Exit codes: 0 success, 1 usage error, 2 data error. Settings resolve as
built-in defaults < config file (flat key=value) < command-line flags.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

from . import __version__
from .corpus import (
    PreprocessConfig,
    Rejected,
    default_stopwords,
    load_corpus,
    load_stopwords,
    preprocess,
)
from .evaluation import MODES, Qrels, evaluate_run
from .index import build_index, load_snapshot, save_index
from .knowledge import LexiconTagger, load_concept_store
from .pipeline import VARIANTS, SystemConfig, run_topics
from .retrieval import Topic, write_run


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


_CONFIG_KEYS = {
    "mu": float,
    "alpha": float,
    "beta": float,
    "k": "k",
    "n": int,
    "r": float,
    "lambda": float,
    "fb_docs": int,
    "fb_terms": int,
    "depth": int,
}


def _parse_k(raw: str) -> int | None:
    if raw.strip().lower() == "max":
        return None
    return int(raw)


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read config file: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value")
        key, _, raw = line.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        if key not in _CONFIG_KEYS:
            raise DataError(f"{path}:{lineno}: unknown setting {key!r}")
        try:
            caster = _CONFIG_KEYS[key]
            values["lam" if key == "lambda" else key] = (
                _parse_k(raw) if caster == "k" else caster(raw)
            )
        except ValueError:
            raise DataError(f"{path}:{lineno}: bad value {raw!r} for {key}") from None
    return values


def _collect_overrides(args) -> dict:
    overrides = {}
    if getattr(args, "config", None):
        overrides.update(_read_config_file(args.config))
    for attr, key in (
        ("mu", "mu"), ("alpha", "alpha"), ("beta", "beta"), ("k", "k"),
        ("n", "n"), ("r", "r"), ("lam", "lam"), ("fb_docs", "fb_docs"),
        ("fb_terms", "fb_terms"), ("depth", "depth"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = _parse_k(value) if key == "k" else value
    return overrides


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value settings file")
    parser.add_argument("--mu", type=float, help="Dirichlet smoothing pseudo-count")
    parser.add_argument("--alpha", type=float, help="knowledge-query interpolation weight")
    parser.add_argument("--beta", type=float, help="feedback interpolation weight")
    parser.add_argument("--k", help="knowledge terms kept per topic (int or MAX)")
    parser.add_argument("--n", type=int, help="pseudo-relevance document count")
    parser.add_argument("--r", type=float, help="temporal prior rate")
    parser.add_argument("--lambda", dest="lam", type=float, help="mixture noise weight")
    parser.add_argument("--fb-docs", dest="fb_docs", type=int, help="feedback document count")
    parser.add_argument("--fb-terms", dest="fb_terms", type=int, help="feedback terms kept")
    parser.add_argument("--depth", type=int, help="retrieval depth")


def _preprocess_config(args, meta: dict | None = None) -> PreprocessConfig:
    meta = meta or {}
    if getattr(args, "stopwords", None):
        stopwords = load_stopwords(args.stopwords)
    elif "stopwords" in meta:
        stopwords = frozenset(meta["stopwords"])
    else:
        stopwords = default_stopwords()
    merge = bool(meta.get("merge_url_titles", True))
    if not getattr(args, "url_titles", True):
        merge = False
    return PreprocessConfig(
        stopword_list=stopwords,
        retweet_prefix=getattr(args, "retweet_prefix", None) or meta.get("retweet_prefix", "RT"),
        english_filter=getattr(args, "english_filter", None) or meta.get("english_filter", "off"),
        merge_url_titles=merge,
    )


def _load_topics(path: str) -> list[Topic]:
    topics = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    topics.append(Topic(
                        id=str(obj["id"]),
                        query_text=str(obj["query"]),
                        query_time=float(obj["query_time"]),
                    ))
                except (KeyError, ValueError, json.JSONDecodeError) as exc:
                    raise DataError(f"{path}:{lineno}: bad topic record ({exc})") from exc
    except OSError as exc:
        raise DataError(f"cannot read topics file: {exc}") from exc
    return topics


def _load_concept_override(path: str) -> dict[str, list[str]]:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read concept override file: {exc}") from exc
    if not isinstance(obj, dict) or not all(
        isinstance(v, list) and all(isinstance(c, str) for c in v) for v in obj.values()
    ):
        raise DataError(f"{path}: expected {{topic_id: [concept_id, ...]}}")
    return {str(k): list(v) for k, v in obj.items()}


def cmd_index(args) -> int:
    cfg = _preprocess_config(args)
    try:
        reader = load_corpus(args.corpus)
    except OSError as exc:
        raise DataError(str(exc)) from exc

    docs = []
    rejected: dict[str, int] = {}
    for raw in reader:
        outcome = preprocess(raw, cfg)
        if isinstance(outcome, Rejected):
            rejected[outcome.reason] = rejected.get(outcome.reason, 0) + 1
        else:
            docs.append(outcome)

    try:
        index = build_index(docs)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    meta = {
        "stopwords": sorted(cfg.stopword_list),
        "retweet_prefix": cfg.retweet_prefix,
        "english_filter": cfg.english_filter,
        "merge_url_titles": cfg.merge_url_titles,
    }
    save_index(index, args.out, meta)

    print(f"indexed {len(index)} documents")
    for reason in sorted(rejected):
        print(f"rejected ({reason}): {rejected[reason]}")
    if reader.skipped:
        print(f"skipped malformed lines: {reader.skipped}")
    print(f"vocabulary size: {len(index.collection_counts)}")
    print(f"collection length: {index.collection_length}")
    return 0


def _run_to_text(args, extra_overrides: dict | None = None) -> str:
    try:
        index, meta = load_snapshot(args.index)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot load index snapshot: {exc}") from exc
    cfg = _preprocess_config(args, meta)
    topics = _load_topics(args.topics)

    overrides = _collect_overrides(args)
    if getattr(args, "concept_override", None):
        overrides["concept_override"] = _load_concept_override(args.concept_override)
    if extra_overrides:
        overrides.update(extra_overrides)
    try:
        config = SystemConfig.for_variant(args.variant, **overrides)
    except ValueError as exc:
        raise DataError(str(exc)) from exc

    store = None
    if config.variant in ("qefb", "qefbnt", "qefb_smm"):
        if not getattr(args, "store", None):
            raise DataError(f"variant {config.variant!r} requires --store")
        try:
            store = load_concept_store(args.store)
        except (OSError, ValueError) as exc:
            raise DataError(f"cannot load concept store: {exc}") from exc
    tagger = (
        LexiconTagger.from_file(args.lexicon)
        if getattr(args, "lexicon", None)
        else LexiconTagger.bundled()
    )

    debug = open(args.debug_dump, "w", encoding="utf-8") if getattr(args, "debug_dump", None) else None
    try:
        ranked_lists = run_topics(topics, index, config, cfg, store, tagger, debug)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    finally:
        if debug is not None:
            debug.close()
    return write_run(ranked_lists, args.tag or config.variant)


def cmd_run(args) -> int:
    text = _run_to_text(args)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_eval(args) -> int:
    n_values = tuple(args.n) if args.n else (30,)
    try:
        qrels = Qrels.load(args.qrels)
        report = evaluate_run(args.run, qrels, args.mode, n_values)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    print(report.render_table())
    if args.json_out:
        Path(args.json_out).write_text(report.to_json() + "\n", encoding="utf-8")
    return 0


_SWEEP_PARAMS = ("alpha", "beta", "k", "n", "r")


def _parse_sweep_values(param: str, raw: str) -> list:
    values = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            if param == "k":
                values.append(_parse_k(piece))
            elif param == "n":
                values.append(int(piece))
            else:
                values.append(float(piece))
        except ValueError:
            raise UsageError(f"bad value {piece!r} for parameter {param}") from None
    if not values:
        raise UsageError("no sweep values given")
    return values


def cmd_sweep(args) -> int:
    param = args.param
    values = _parse_sweep_values(param, args.values)
    n_values = (1, 5, 10, 30) if param == "r" else (30,)

    try:
        qrels = Qrels.load(args.qrels)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc

    rows = []
    for value in values:
        run_text = _run_to_text(args, {param: value})
        with tempfile.NamedTemporaryFile("w", suffix=".run", delete=False) as tmp:
            tmp.write(run_text)
            tmp_path = tmp.name
        try:
            report = evaluate_run(tmp_path, qrels, args.mode, n_values)
        finally:
            Path(tmp_path).unlink(missing_ok=True)
        rows.append((value, report.map_score, {n: report.p_at_n[n] for n in n_values}))

    header = [param, "MAP"] + [f"P@{n}" for n in n_values]
    table = [header]
    for value, map_score, p_at in rows:
        label = "MAX" if value is None else str(value)
        table.append([label, f"{map_score:.4f}"] + [f"{p_at[n]:.4f}" for n in n_values])
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    for row in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())

    if args.out:
        lines = ["\t".join(header)]
        for value, map_score, p_at in rows:
            label = "MAX" if value is None else repr(value)
            lines.append("\t".join([label, repr(map_score)] + [repr(p_at[n]) for n in n_values]))
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mbsearch", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mbsearch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_index = sub.add_parser("index", help="preprocess a corpus and build an index snapshot")
    p_index.add_argument("--corpus", required=True, help="line-delimited JSON corpus file")
    p_index.add_argument("--out", required=True, help="index snapshot output path")
    p_index.add_argument("--stopwords", help="stopword file (default: bundled list)")
    p_index.add_argument("--english-filter", choices=("off", "heuristic"), dest="english_filter")
    p_index.add_argument("--retweet-prefix", dest="retweet_prefix")
    p_index.add_argument("--no-url-titles", dest="url_titles", action="store_false")
    p_index.set_defaults(func=cmd_index)

    p_run = sub.add_parser("run", help="rank topics and write a TREC run file")
    p_run.add_argument("--index", required=True, help="index snapshot")
    p_run.add_argument("--topics", required=True, help="topics file (JSON lines)")
    p_run.add_argument("--variant", required=True, choices=VARIANTS)
    p_run.add_argument("--store", help="concept store (required for qefb variants)")
    p_run.add_argument("--lexicon", help="part-of-speech lexicon file")
    p_run.add_argument("--stopwords", help="stopword file (default: from the snapshot)")
    p_run.add_argument("--out", help="run file path (default: stdout)")
    p_run.add_argument("--tag", help="run tag (default: variant name)")
    p_run.add_argument("--concept-override", dest="concept_override",
                       help="JSON file mapping topic ids to concept ids")
    p_run.add_argument("--debug-dump", dest="debug_dump",
                       help="write per-topic expansion/feedback details here")
    _add_config_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("eval", help="score a run file against qrels")
    p_eval.add_argument("--run", required=True)
    p_eval.add_argument("--qrels", required=True)
    p_eval.add_argument("--mode", choices=sorted(MODES), default="allrel")
    p_eval.add_argument("--n", type=int, action="append", default=None,
                        help="precision cutoffs (repeatable; default 30)")
    p_eval.add_argument("--json-out", dest="json_out", help="also write the report as JSON")
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="re-run and evaluate over a parameter grid")
    p_sweep.add_argument("--index", required=True)
    p_sweep.add_argument("--topics", required=True)
    p_sweep.add_argument("--qrels", required=True)
    p_sweep.add_argument("--variant", required=True, choices=VARIANTS)
    p_sweep.add_argument("--param", required=True, type=str.lower, choices=_SWEEP_PARAMS)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated grid (K accepts MAX)")
    p_sweep.add_argument("--store", help="concept store (required for qefb variants)")
    p_sweep.add_argument("--lexicon")
    p_sweep.add_argument("--stopwords")
    p_sweep.add_argument("--mode", choices=sorted(MODES), default="allrel")
    p_sweep.add_argument("--out", help="write machine-readable TSV rows here")
    p_sweep.add_argument("--tag")
    p_sweep.add_argument("--concept-override", dest="concept_override")
    _add_config_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mbsearch: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"mbsearch: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
