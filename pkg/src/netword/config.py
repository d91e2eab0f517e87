"""Runtime settings: defaults, config file, environment, explicit flags.

Precedence (lowest to highest): built-in defaults, config file (path
from --config or NETWORD_CONFIG), NETWORD_* environment variables,
explicit flag overrides. ``build_deps`` assembles the shared pipeline
dependencies (catalog, corpus, index, embedder, backend) from a resolved
settings object; the HTTP transport allowlist contains exactly the LLM
and embedding base URLs.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import corpus as corpus_mod
from . import embedding, retriever
from .backends import (
    DEFAULT_BASE_URL,
    DEFAULT_MODEL,
    DEFAULT_TIMEOUT,
    HttpBackend,
    ScriptedBackend,
    ScriptedRule,
)
from .errors import NetwordError
from .pipeline import PipelineConfig, PipelineDeps
from .retriever import RetrieverConfig
from .transport import LocalTransport

ENV_CONFIG = "NETWORD_CONFIG"
ENV_LLM_URL = "NETWORD_LLM_URL"
ENV_LLM_MODEL = "NETWORD_LLM_MODEL"
ENV_BIND = "NETWORD_BIND"

DEFAULT_BIND = "127.0.0.1:8470"


@dataclass(frozen=True)
class Settings:
    llm_url: str = DEFAULT_BASE_URL
    llm_model: str = DEFAULT_MODEL
    llm_timeout: float = DEFAULT_TIMEOUT
    backend_mode: str = "http"  # http | scripted
    scripted_rules: tuple[ScriptedRule, ...] = ()
    scripted_default: str = ""
    embedding_mode: str = embedding.MODE_FALLBACK
    embedding_url: str = "http://localhost:11434/api/embed"
    embedding_model: str = "bge-small"
    embedding_dim: int = 256
    k_classifier: int = 8
    k_generator: int = 8
    rag_enabled: bool = True
    retry_on_invalid: bool = True
    catalog_path: str = ""  # empty = shipped default
    corpus_path: str = ""  # empty = shipped default
    generator_corpus_path: str = ""  # empty = step 2 shares the corpus above
    index_cache_path: str = ""
    bind: str = DEFAULT_BIND
    db_path: str = ""  # empty = in-memory
    assets_dir: str = ""

    @property
    def bind_host(self) -> str:
        return self.bind.rsplit(":", 1)[0]

    @property
    def bind_port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1])


_FILE_KEYS = {f.name for f in fields(Settings)}


def _settings_from_file(path: Path) -> dict:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise NetwordError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise NetwordError(f"config file {path}: malformed JSON: {exc.msg}")
    unknown = set(raw) - _FILE_KEYS
    if unknown:
        raise NetwordError(
            f"config file {path}: unknown key(s): {', '.join(sorted(unknown))}"
        )
    if "scripted_rules" in raw:
        raw["scripted_rules"] = tuple(
            ScriptedRule(
                match=r["match"], response=r["response"], where=r.get("where", "user")
            )
            for r in raw["scripted_rules"]
        )
    return raw


def load_settings(
    config_path: str | None = None,
    env: dict | None = None,
    overrides: dict | None = None,
) -> Settings:
    """Merge defaults < file < env < explicit overrides."""
    env = os.environ if env is None else env
    settings = Settings()

    path = config_path or env.get(ENV_CONFIG)
    if path:
        settings = replace(settings, **_settings_from_file(Path(path)))

    env_map = {}
    if env.get(ENV_LLM_URL):
        env_map["llm_url"] = env[ENV_LLM_URL]
    if env.get(ENV_LLM_MODEL):
        env_map["llm_model"] = env[ENV_LLM_MODEL]
    if env.get(ENV_BIND):
        env_map["bind"] = env[ENV_BIND]
    if env_map:
        settings = replace(settings, **env_map)

    if overrides:
        cleaned = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(cleaned) - _FILE_KEYS
        if unknown:
            raise NetwordError(f"unknown setting(s): {', '.join(sorted(unknown))}")
        if cleaned:
            settings = replace(settings, **cleaned)
    return settings


@dataclass
class Deps:
    """Everything a pipeline run needs, plus the paths it came from."""

    settings: Settings
    catalog: corpus_mod.ClassCatalog
    dataset: corpus_mod.Dataset
    index: retriever.VectorIndex
    embedder: embedding.EmbedderConfig
    backend: object
    transport: LocalTransport | None
    corpus_path: Path | None = None
    generator_dataset: corpus_mod.Dataset | None = None
    generator_index: retriever.VectorIndex | None = None

    def pipeline_deps(self) -> PipelineDeps:
        return PipelineDeps(
            catalog=self.catalog,
            dataset=self.dataset,
            index=self.index,
            embedder=self.embedder,
            backend=self.backend,
            transport=self.transport,
            generator_dataset=self.generator_dataset,
            generator_index=self.generator_index,
        )

    def pipeline_config(self, rag_enabled: bool | None = None) -> PipelineConfig:
        return PipelineConfig(
            retriever=RetrieverConfig(
                k_classifier=self.settings.k_classifier,
                k_generator=self.settings.k_generator,
            ),
            rag_enabled=self.settings.rag_enabled
            if rag_enabled is None
            else rag_enabled,
            retry_on_invalid=self.settings.retry_on_invalid,
        )


def build_embedder(settings: Settings) -> embedding.EmbedderConfig:
    return embedding.EmbedderConfig(
        mode=settings.embedding_mode,
        endpoint_url=settings.embedding_url,
        model_name=settings.embedding_model,
        dim=settings.embedding_dim,
    )


def build_backend(settings: Settings, transport: LocalTransport | None):
    if settings.backend_mode == "scripted":
        return ScriptedBackend(
            rules=settings.scripted_rules,
            default_response=settings.scripted_default,
        )
    if settings.backend_mode == "http":
        return HttpBackend(
            base_url=settings.llm_url,
            model_name=settings.llm_model,
            transport=transport,
            timeout=settings.llm_timeout,
        )
    raise NetwordError(f"unknown backend_mode {settings.backend_mode!r}")


def build_deps(settings: Settings) -> Deps:
    """Load catalog and corpus, build the index, and wire the backend."""
    if settings.catalog_path:
        catalog = corpus_mod.load_catalog(settings.catalog_path)
    else:
        catalog = corpus_mod.default_catalog()

    corpus_path: Path | None = None
    if settings.corpus_path:
        corpus_path = Path(settings.corpus_path)
        dataset = corpus_mod.load_dataset(corpus_path, catalog)
    else:
        dataset = corpus_mod.default_corpus(catalog)

    allowed = [settings.llm_url]
    if settings.embedding_mode == embedding.MODE_REMOTE:
        allowed.append(settings.embedding_url)
    transport = LocalTransport(allowed_bases=allowed, timeout=settings.llm_timeout)

    embedder = build_embedder(settings)
    index = retriever.build_index(
        dataset,
        embedder,
        transport=transport,
        cache_path=settings.index_cache_path or None,
    )

    generator_dataset = None
    generator_index = None
    if settings.generator_corpus_path:
        generator_dataset = corpus_mod.load_dataset(
            settings.generator_corpus_path, catalog, name="generator-corpus"
        )
        generator_index = retriever.build_index(
            generator_dataset,
            embedder,
            transport=transport,
            cache_path=(
                settings.index_cache_path + ".generator"
                if settings.index_cache_path
                else None
            ),
        )

    backend = build_backend(settings, transport)
    return Deps(
        settings=settings,
        catalog=catalog,
        dataset=dataset,
        index=index,
        embedder=embedder,
        backend=backend,
        transport=transport,
        corpus_path=corpus_path,
        generator_dataset=generator_dataset,
        generator_index=generator_index,
    )
