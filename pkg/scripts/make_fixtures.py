#!/usr/bin/env python3
"""Generate the bundled synthetic test fixtures (corpus, topics, concept
store, qrels). Deterministic under the fixed seed; outputs are committed,
so re-running should be a no-op unless this script changes.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data"

TOPICS = [
    {"id": "T01", "query": "Mila Kunis in Oz movie", "query_time": 26.0},
    {"id": "T02", "query": "UK wine industry", "query_time": 27.5},
    {"id": "T03", "query": "Australian Open Djokovic vs. Murray", "query_time": 25.25},
    {"id": "T04", "query": "memories of Mr. Rogers", "query_time": 28.0},
    {"id": "T05", "query": "water shortage", "query_time": 30.0},
]

CONCEPTS = [
    {
        "concept_id": "c.0101", "name": "Mila Kunis",
        "aliases": ["Milena Markovna Kunis"],
        "notable_for": ["Actor"], "notable_types": ["Celebrity"],
        "description": (
            "Milena Markovna Kunis is an American actress and voice artist. "
            "She played the wicked witch Theodora in Oz the Great and Powerful "
            "and earlier voiced a character on a long running animated show."
        ),
        "domain_properties": {
            "film": "Starred in the Oz movie as a witch alongside James Franco."
        },
    },
    {
        "concept_id": "c.0102", "name": "The Wizard of Oz",
        "aliases": ["Oz"],
        "notable_for": ["Film"], "notable_types": ["Movie"],
        "description": (
            "A classic fantasy film following Dorothy through the Land of Oz, "
            "with witches, the Emerald City and the great and powerful wizard."
        ),
        "domain_properties": {},
    },
    {
        "concept_id": "c.0201", "name": "Wine",
        "aliases": [],
        "notable_for": [], "notable_types": ["Beverage"],
        "description": (
            "Wine is an alcoholic drink made from fermented grapes. The wine "
            "industry spans vineyards, wineries, grape growers and the export "
            "trade, and contributes billions to national economies."
        ),
        "domain_properties": {
            "business": "Vineyard acreage, grape harvest reports and winery revenue."
        },
    },
    {
        "concept_id": "c.0202", "name": "United Kingdom",
        "aliases": ["UK", "Great Britain"],
        "notable_for": [], "notable_types": ["Country"],
        "description": (
            "The United Kingdom is a country in north-western Europe. English "
            "vineyards and British sparkling wine production have grown quickly."
        ),
        "domain_properties": {},
    },
    {
        "concept_id": "c.0301", "name": "Australian Open",
        "aliases": [],
        "notable_for": ["Tennis tournament"], "notable_types": ["Sports event"],
        "description": (
            "The Australian Open is a grand slam tennis tournament held each "
            "January in Melbourne, with finals on the famous centre court."
        ),
        "domain_properties": {},
    },
    {
        "concept_id": "c.0302", "name": "Novak Djokovic",
        "aliases": ["Djokovic"],
        "notable_for": ["Tennis player"], "notable_types": ["Athlete"],
        "description": (
            "Novak Djokovic is a professional tennis player and multiple grand "
            "slam champion known for his return game and rivalry with Murray."
        ),
        "domain_properties": {},
    },
    {
        "concept_id": "c.0303", "name": "Andy Murray",
        "aliases": ["Murray"],
        "notable_for": ["Tennis player"], "notable_types": ["Athlete"],
        "description": (
            "Andy Murray is a British tennis player, an olympic champion and a "
            "grand slam winner who has contested several Melbourne finals."
        ),
        "domain_properties": {},
    },
    {
        "concept_id": "c.0401", "name": "Fred Rogers",
        "aliases": ["Mr. Rogers", "Mister Rogers"],
        "notable_for": ["Television host"], "notable_types": ["TV Personality"],
        "description": (
            "Fred Rogers was an American television host whose gentle "
            "neighborhood show taught children kindness for decades; fans "
            "share birthday memories of his cardigan and sneakers."
        ),
        "domain_properties": {},
    },
    {
        "concept_id": "c.0501", "name": "Water scarcity",
        "aliases": ["Water shortage"],
        "notable_for": [], "notable_types": ["Issue"],
        "description": (
            "Water scarcity is the lack of fresh water resources to meet "
            "demand. Droughts affect Africa and other arid areas, straining "
            "global supply, reservoirs and irrigation."
        ),
        "domain_properties": {
            "environment": "Drought monitoring, reservoir levels and rainfall deficits."
        },
    },
    {
        "concept_id": "c.0901", "name": "Wine Country",
        "aliases": [],
        "notable_for": ["Film"], "notable_types": ["Movie"],
        "description": "A comedy film about a birthday trip to a vineyard region.",
        "domain_properties": {},
    },
]

# word pools per topic: (strong words, weak words)
POOLS = {
    "T01": (
        ["mila", "kunis", "oz", "movie", "witch", "theodora", "premiere"],
        ["film", "actress", "trailer", "hollywood", "great", "powerful", "emerald"],
    ),
    "T02": (
        ["wine", "industry", "uk", "grape", "vineyard", "export"],
        ["harvest", "winery", "economy", "billions", "growers", "british", "report"],
    ),
    "T03": (
        ["djokovic", "murray", "australian", "open", "tennis", "final"],
        ["melbourne", "champion", "slam", "court", "rally", "set", "serve"],
    ),
    "T04": (
        ["rogers", "mister", "memories", "neighborhood", "television"],
        ["kindness", "childhood", "host", "cardigan", "birthday", "legacy", "sneakers"],
    ),
    "T05": (
        ["water", "shortage", "drought", "supply", "africa"],
        ["reservoir", "rain", "global", "crisis", "affect", "area", "irrigation"],
    ),
}

FILLER = (
    "coffee breakfast traffic monday sunshine puppy dinner football playlist "
    "haircut homework umbrella pizza garden bicycle laundry novel concert "
    "airport sunset jacket museum recipe keyboard battery holiday painting "
    "river mountain library cinema market sandwich"
).split()

CHATTER = (
    "today tonight love hate watching reading waiting totally finally super "
    "really hope think feel left right home work friend city"
).split()


def make_text(rng: random.Random, strong: list[str], weak: list[str], n_strong: int, n_weak: int) -> str:
    words = rng.sample(strong, min(n_strong, len(strong))) + rng.sample(weak, min(n_weak, len(weak)))
    words += rng.sample(CHATTER, rng.randint(2, 4)) + rng.sample(FILLER, rng.randint(0, 2))
    rng.shuffle(words)
    return " ".join(words)


def main() -> None:
    rng = random.Random(20260810)
    OUT.mkdir(parents=True, exist_ok=True)

    docs = []
    qrels: list[tuple[str, str, int]] = []
    doc_no = 0

    def add_doc(text: str, post_time: float, url_titles: list[str] | None = None) -> str:
        nonlocal doc_no
        doc_no += 1
        doc_id = f"d{doc_no:03d}"
        rec = {"id": doc_id, "text": text, "post_time": round(post_time, 3)}
        if url_titles:
            rec["url_titles"] = url_titles
        docs.append(rec)
        return doc_id

    for topic in TOPICS:
        tid = topic["id"]
        qt = topic["query_time"]
        strong, weak = POOLS[tid]
        # 10 highly relevant, 8 minimally relevant, 4 judged irrelevant,
        # 3 on-topic but posted after the query time (left unjudged)
        for _ in range(10):
            doc_id = add_doc(
                make_text(rng, strong, weak, 3, 2),
                rng.uniform(1.0, qt - 0.05),
                url_titles=[" ".join(rng.sample(strong + weak, 3))] if rng.random() < 0.3 else None,
            )
            qrels.append((tid, doc_id, 2))
        for _ in range(8):
            doc_id = add_doc(make_text(rng, strong, weak, 1, 2), rng.uniform(1.0, qt - 0.05))
            qrels.append((tid, doc_id, 1))
        for _ in range(4):
            doc_id = add_doc(make_text(rng, weak[-2:], FILLER, 1, 3), rng.uniform(1.0, qt - 0.05))
            qrels.append((tid, doc_id, 0))
        for _ in range(3):
            add_doc(make_text(rng, strong, weak, 3, 2), rng.uniform(qt + 0.1, qt + 4.0))

    # background chatter, a few retweets and non-English lines
    while doc_no < 192:
        text = " ".join(rng.sample(FILLER, rng.randint(4, 7)) + rng.sample(CHATTER, 3))
        add_doc(text, rng.uniform(0.5, 31.5))
    for _ in range(5):
        add_doc("RT " + " ".join(rng.sample(FILLER, 5)), rng.uniform(0.5, 31.5))
    for _ in range(3):
        add_doc("сегодня отличная погода для прогулки в парке", rng.uniform(0.5, 31.5))

    rng.shuffle(docs)

    with open(OUT / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for rec in docs:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    with open(OUT / "topics.jsonl", "w", encoding="utf-8") as fh:
        for topic in TOPICS:
            fh.write(json.dumps(topic) + "\n")
    with open(OUT / "concepts.jsonl", "w", encoding="utf-8") as fh:
        for rec in CONCEPTS:
            fh.write(json.dumps(rec) + "\n")
    with open(OUT / "qrels.txt", "w", encoding="utf-8") as fh:
        for tid, doc_id, grade in qrels:
            fh.write(f"{tid} 0 {doc_id} {grade}\n")

    print(f"wrote {len(docs)} docs, {len(TOPICS)} topics, {len(CONCEPTS)} concepts, "
          f"{len(qrels)} judgments to {OUT}")


if __name__ == "__main__":
    main()
