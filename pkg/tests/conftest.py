from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make helpers importable

from netword import corpus as corpus_mod
from netword import embedding, retriever
from netword.pipeline import PipelineDeps

FIXTURES = Path(__file__).parent / "fixtures"
GOLDENS = Path(__file__).parent / "goldens"


@pytest.fixture(scope="session")
def catalog():
    return corpus_mod.default_catalog()


@pytest.fixture(scope="session")
def dataset(catalog):
    return corpus_mod.default_corpus(catalog)


@pytest.fixture(scope="session")
def embedder():
    return embedding.EmbedderConfig()


@pytest.fixture(scope="session")
def index(dataset, embedder):
    return retriever.build_index(dataset, embedder)


@pytest.fixture(scope="session")
def eval_dataset(catalog):
    return corpus_mod.load_dataset(
        FIXTURES / "eval25.jsonl", catalog, split=corpus_mod.SPLIT_EVAL
    )


@pytest.fixture
def make_deps(catalog, dataset, index, embedder):
    def _make(backend) -> PipelineDeps:
        return PipelineDeps(
            catalog=catalog,
            dataset=dataset,
            index=index,
            embedder=embedder,
            backend=backend,
        )

    return _make
