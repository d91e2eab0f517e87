"""Immutable vector index over corpus examples with exact top-k retrieval.

Search is an exhaustive cosine scan with a stable sort: corpora here are
small (hundreds of examples) and exactness makes retrieval testable. The
index exists to reuse embeddings, not for sublinear search. Ties break
by corpus insertion order (earlier wins), which keeps results stable
under id renaming.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import corpus as corpus_mod
from . import embedding
from .embedding import EmbedderConfig, EmbeddingVector
from .errors import EmbeddingError
from .transport import LocalTransport


@dataclass(frozen=True)
class IndexEntry:
    example_id: str
    vector: EmbeddingVector
    class_label: str


@dataclass(frozen=True)
class VectorIndex:
    entries: tuple[IndexEntry, ...]
    dim: int
    corpus_fingerprint: str

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.example_id for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RetrieverConfig:
    k_classifier: int = 8
    k_generator: int = 8
    class_filter: str | None = None

    def __post_init__(self):
        if self.k_classifier < 1 or self.k_generator < 1:
            raise ValueError("retriever k values must be >= 1")


def _embedder_signature(config: EmbedderConfig) -> dict:
    return {
        "mode": config.mode,
        "endpoint_url": config.endpoint_url,
        "model_name": config.model_name,
        "dim": config.dim,
        "instruction_prefix": config.instruction_prefix,
    }


def build_index(
    dataset: corpus_mod.Dataset,
    embedder: EmbedderConfig,
    transport: LocalTransport | None = None,
    cache_path: str | Path | None = None,
) -> VectorIndex:
    """Embed every example input, preserving corpus order.

    With cache_path set, a cache file matching the dataset fingerprint
    and embedder signature skips re-embedding across restarts.
    """
    fingerprint = corpus_mod.fingerprint(dataset)
    if cache_path is not None:
        cached = _load_cache(Path(cache_path), fingerprint, embedder)
        if cached is not None:
            return cached

    texts = [e.input_text for e in dataset.examples]
    try:
        vectors = embedding.embed_many(embedder, texts, transport)
    except EmbeddingError as exc:
        raise EmbeddingError(f"index build failed while embedding corpus: {exc}") from exc
    entries = tuple(
        IndexEntry(example_id=e.id, vector=v, class_label=e.class_label)
        for e, v in zip(dataset.examples, vectors)
    )
    dim = entries[0].vector.dim if entries else embedder.dim
    index = VectorIndex(entries=entries, dim=dim, corpus_fingerprint=fingerprint)
    if cache_path is not None:
        _save_cache(Path(cache_path), index, embedder)
    return index


def _load_cache(
    path: Path, fingerprint: str, embedder: EmbedderConfig
) -> VectorIndex | None:
    if not path.exists():
        return None
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return None
    if raw.get("fingerprint") != fingerprint:
        return None
    if raw.get("embedder") != _embedder_signature(embedder):
        return None
    entries = tuple(
        IndexEntry(
            example_id=e["id"],
            vector=EmbeddingVector(values=tuple(float(v) for v in e["vector"])),
            class_label=e["class"],
        )
        for e in raw["entries"]
    )
    return VectorIndex(
        entries=entries, dim=int(raw["dim"]), corpus_fingerprint=fingerprint
    )


def _save_cache(path: Path, index: VectorIndex, embedder: EmbedderConfig) -> None:
    doc = {
        "fingerprint": index.corpus_fingerprint,
        "embedder": _embedder_signature(embedder),
        "dim": index.dim,
        "entries": [
            {
                "id": e.example_id,
                "class": e.class_label,
                "vector": list(e.vector.values),
            }
            for e in index.entries
        ],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(doc), encoding="utf-8")
    tmp.replace(path)


def top_k(
    index: VectorIndex,
    query: str,
    embedder: EmbedderConfig,
    k: int,
    class_filter: str | None = None,
    transport: LocalTransport | None = None,
) -> list[tuple[str, float]]:
    """Top-k most similar entries as (example id, score), best first.

    class_filter restricts eligibility before ranking. Ties keep corpus
    insertion order. Result length is min(k, eligible entries).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not index.entries:
        return []
    query_vector = embedding.embed(embedder, query, transport)
    scored = [
        (entry.example_id, embedding.cosine(query_vector, entry.vector))
        for entry in index.entries
        if class_filter is None or entry.class_label == class_filter
    ]
    scored.sort(key=lambda pair: pair[1], reverse=True)  # stable: ties keep order
    return scored[:k]
