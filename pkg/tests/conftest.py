import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from buildmetrics.javaparse import parse_source
from buildmetrics.metrics import compute_all_metrics
from buildmetrics.model import build_code_model

CORPUS = Path(__file__).parent / "fixtures" / "corpus"


def load_corpus_units(root: Path = CORPUS):
    return [
        parse_source(p.read_text(), p.relative_to(root).as_posix())
        for p in sorted(root.rglob("*.java"))
    ]


@pytest.fixture(scope="session")
def corpus_model():
    return build_code_model(load_corpus_units())


@pytest.fixture(scope="session")
def corpus_vectors(corpus_model):
    return {v.file_path: v for v in compute_all_metrics(corpus_model)}
