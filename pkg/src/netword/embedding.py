"""Text embeddings for retrieval: remote endpoint or deterministic fallback.

The fallback embedder is a hashed bag-of-words: lowercase the text, split
on non-alphanumeric runs (ASCII a-z, 0-9), hash each token with FNV-1a
64-bit, bucket by hash mod dim, count, then L2-normalize. It needs no
network or model weights, is a pure function of (config, text), and is
specified tightly enough that two implementations agree bitwise on
bucket indices. Remote mode speaks a minimal embedding-server protocol:
POST {"model": ..., "input": [texts]} -> {"embeddings": [[...], ...]}.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import EmbeddingError
from .transport import LocalTransport

MODE_REMOTE = "remote"
MODE_FALLBACK = "fallback"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class EmbeddingVector:
    """Fixed-dimension vector; values are finite floats."""

    values: tuple[float, ...]

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.values):
            raise EmbeddingError("non-finite value in embedding vector")

    @property
    def dim(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class EmbedderConfig:
    mode: str = MODE_FALLBACK
    endpoint_url: str = "http://localhost:11434/api/embed"
    model_name: str = "bge-small"
    dim: int = 256
    instruction_prefix: str = ""
    batch_size: int = 32

    def __post_init__(self):
        if self.mode not in (MODE_REMOTE, MODE_FALLBACK):
            raise ValueError(f"unknown embedder mode {self.mode!r}")
        if self.mode == MODE_FALLBACK and self.dim < 8:
            raise ValueError(f"fallback dim must be >= 8, got {self.dim}")


def fnv1a_64(data: bytes) -> int:
    """FNV-1a 64-bit hash."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def fallback_embed(text: str, dim: int) -> EmbeddingVector:
    """Hashed bag-of-words embedding; zero vector for token-free text."""
    counts = [0.0] * dim
    for token in _tokenize(text):
        counts[fnv1a_64(token.encode("utf-8")) % dim] += 1.0
    norm = math.sqrt(sum(c * c for c in counts))
    if norm == 0.0:
        return EmbeddingVector(values=tuple(counts))
    return EmbeddingVector(values=tuple(c / norm for c in counts))


def _remote_embed_batch(
    config: EmbedderConfig, texts: list[str], transport: LocalTransport
) -> list[EmbeddingVector]:
    payload = {"model": config.model_name, "input": texts}
    try:
        body = transport.post_json(config.endpoint_url, payload)
    except EmbeddingError:
        raise
    except Exception as exc:
        raise EmbeddingError(f"embedding endpoint failed: {exc}") from exc
    rows = body.get("embeddings") if isinstance(body, dict) else None
    if not isinstance(rows, list) or len(rows) != len(texts):
        raise EmbeddingError(
            f"embedding endpoint returned {0 if not isinstance(rows, list) else len(rows)}"
            f" vectors for {len(texts)} inputs"
        )
    vectors = []
    for row in rows:
        vec = EmbeddingVector(values=tuple(float(v) for v in row))
        if vectors and vec.dim != vectors[0].dim:
            raise EmbeddingError("embedding endpoint returned mixed dimensions")
        vectors.append(vec)
    return vectors


def embed_many(
    config: EmbedderConfig,
    texts: list[str],
    transport: LocalTransport | None = None,
) -> list[EmbeddingVector]:
    """Embed texts in order; batches remote calls by config.batch_size."""
    if config.mode == MODE_FALLBACK:
        return [
            fallback_embed(config.instruction_prefix + t, config.dim) for t in texts
        ]
    if transport is None:
        transport = LocalTransport(allowed_bases=[config.endpoint_url])
    prefixed = [config.instruction_prefix + t for t in texts]
    out: list[EmbeddingVector] = []
    for start in range(0, len(prefixed), config.batch_size):
        out.extend(
            _remote_embed_batch(config, prefixed[start : start + config.batch_size], transport)
        )
    if out and any(v.dim != out[0].dim for v in out):
        raise EmbeddingError("embedding endpoint returned mixed dimensions")
    return out


def embed(
    config: EmbedderConfig, text: str, transport: LocalTransport | None = None
) -> EmbeddingVector:
    """Embed one text. Deterministic for a fixed (config, text)."""
    return embed_many(config, [text], transport)[0]


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity in [-1, 1]; 0.0 when either vector is all-zero."""
    if a.dim != b.dim:
        raise EmbeddingError(f"dimension mismatch: {a.dim} vs {b.dim}")
    dot = 0.0
    norm_a = 0.0
    norm_b = 0.0
    for x, y in zip(a.values, b.values):
        dot += x * y
        norm_a += x * x
        norm_b += y * y
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    # sqrt before multiplying: the product of two tiny sums can underflow.
    value = dot / (math.sqrt(norm_a) * math.sqrt(norm_b))
    return max(-1.0, min(1.0, value))
