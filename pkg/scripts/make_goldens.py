#!/usr/bin/env python3
"""Build the committed golden run files and evaluation report from the
bundled fixtures. The regression suite re-runs the same commands and
requires byte-identical output, and separately cross-checks these files
against an independent naive pipeline.
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"
GOLDEN = DATA / "golden"

VARIANTS = ["simplekl", "qesmm", "qefb", "qefbnt", "qefb_smm"]


def run(args: list[str]) -> None:
    print("+", " ".join(args))
    subprocess.run([sys.executable, "-m", "mbsearch", *args], check=True, cwd=ROOT)


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    index_path = GOLDEN / "index.json"
    run([
        "index",
        "--corpus", str(DATA / "corpus.jsonl"),
        "--out", str(index_path),
        "--english-filter", "heuristic",
    ])
    for variant in VARIANTS:
        args = [
            "run",
            "--index", str(index_path),
            "--topics", str(DATA / "topics.jsonl"),
            "--variant", variant,
            "--out", str(GOLDEN / f"{variant}.run"),
            "--tag", "golden",
        ]
        if variant in ("qefb", "qefbnt", "qefb_smm"):
            args += ["--store", str(DATA / "concepts.jsonl")]
        run(args)
    run([
        "eval",
        "--run", str(GOLDEN / "qefb_smm.run"),
        "--qrels", str(DATA / "qrels.txt"),
        "--json-out", str(GOLDEN / "qefb_smm.report.json"),
    ])
    print(f"golden files written to {GOLDEN}")


if __name__ == "__main__":
    main()
