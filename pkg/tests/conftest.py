from pathlib import Path

import pytest

from taxoseg.annotation import load_gazetteer
from taxoseg.taxonomy import load_taxonomy

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def people_taxonomy():
    return load_taxonomy(FIXTURES / "taxonomy-people.json")


@pytest.fixture(scope="session")
def topics_taxonomy():
    return load_taxonomy(FIXTURES / "topics" / "taxonomy.json")


@pytest.fixture(scope="session")
def topics_gazetteer():
    return load_gazetteer(FIXTURES / "topics" / "gazetteer.json")


@pytest.fixture(scope="session")
def topics_corpus_dir():
    return FIXTURES / "topics" / "corpus"
