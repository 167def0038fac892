import gzip
import os
import shutil
from pathlib import Path

import pytest

from apsi import load_corpus, load_tsv

DATA = Path(__file__).parent / "data"

WORDNET_ENV = "APSI_WORDNET_DIR"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def toy_taxonomy_path():
    return DATA / "toy_taxonomy.tsv"


@pytest.fixture(scope="session")
def toy_taxonomy(toy_taxonomy_path):
    return load_tsv(toy_taxonomy_path)


@pytest.fixture(scope="session")
def toy_corpus_path():
    return DATA / "toy_corpus.jsonl"


@pytest.fixture(scope="session")
def toy_corpus(toy_corpus_path):
    return load_corpus(toy_corpus_path)


@pytest.fixture(scope="session")
def toy_refs_path():
    return DATA / "toy_refs.jsonl"


@pytest.fixture(scope="session")
def toy_test_path():
    return DATA / "toy_test.jsonl"


@pytest.fixture(scope="session")
def toy_refs_batch_path():
    return DATA / "toy_refs_batch.jsonl"


@pytest.fixture(scope="session")
def toy_vectors_path():
    return DATA / "toy_vectors.txt"


@pytest.fixture(scope="session")
def golden_path():
    return DATA / "golden_buy_house.jsonl"


@pytest.fixture(scope="session")
def wordnet_dir(tmp_path_factory):
    """Directory holding a WordNet database in the standard file layout.

    Set APSI_WORDNET_DIR to point at an existing installation; otherwise
    the bundled gzipped copy is unpacked once per session.
    """
    override = os.environ.get(WORDNET_ENV)
    if override:
        return Path(override)
    target = tmp_path_factory.mktemp("wordnet")
    for name in ("data.noun", "data.verb", "index.noun", "index.verb"):
        with gzip.open(DATA / "wordnet31" / f"{name}.gz", "rb") as src:
            with open(target / name, "wb") as dst:
                shutil.copyfileobj(src, dst)
    return target
