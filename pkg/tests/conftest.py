import json
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
DATA_DIR = TESTS_DIR / "data"
GOLDEN_DIR = DATA_DIR / "golden"
PKG_DATA_DIR = TESTS_DIR.parent / "src" / "mbsearch" / "data"

sys.path.insert(0, str(TESTS_DIR))  # makes `import reference` work

from mbsearch import Document, PreprocessConfig, build_index  # noqa: E402
from mbsearch.knowledge import Concept, ConceptStore  # noqa: E402


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def two_doc_index():
    """d1 = "a b", d2 = "b b": the collection is {a:1, b:3}, length 4."""
    return build_index([
        Document("d1", {"a": 1, "b": 1}, 2, 0.5),
        Document("d2", {"b": 2}, 2, 0.6),
    ])


@pytest.fixture
def plain_cfg():
    return PreprocessConfig(stopword_list=frozenset({"a", "the", "of", "in", "and"}))


def make_store(*records: dict) -> ConceptStore:
    """Build an in-memory concept store from plain dicts."""
    concepts = {}
    for rec in records:
        concept = Concept(
            concept_id=rec["concept_id"],
            name=rec["name"],
            aliases=list(rec.get("aliases", [])),
            notable_for=list(rec.get("notable_for", [])),
            notable_types=list(rec.get("notable_types", [])),
            description=rec.get("description", ""),
            domain_properties=dict(rec.get("domain_properties", {})),
        )
        concepts[concept.concept_id] = concept
    return ConceptStore(concepts)


MILA_KUNIS = {
    "concept_id": "c.0101",
    "name": "Mila Kunis",
    "aliases": ["Milena Markovna Kunis"],
    "notable_for": ["Actor"],
    "notable_types": ["Celebrity"],
    "description": (
        "Milena Markovna is an American actress and voice artist. She played "
        "the wicked witch in Oz the Great and Powerful."
    ),
}

WIZARD_OF_OZ = {
    "concept_id": "c.0102",
    "name": "The Wizard of Oz",
    "aliases": ["Oz"],
    "notable_for": ["Film"],
    "notable_types": ["Movie"],
    "description": "A classic fantasy film set in the Land of Oz.",
}


@pytest.fixture
def mila_store():
    return make_store(MILA_KUNIS, WIZARD_OF_OZ)


def write_jsonl(path: Path, records) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return path
