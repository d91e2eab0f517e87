from __future__ import annotations

import json

import pytest

from netword import config as config_mod
from netword.backends import HttpBackend, ScriptedBackend
from netword.errors import NetwordError


def write_config(tmp_path, **settings):
    path = tmp_path / "netword.json"
    path.write_text(json.dumps(settings))
    return str(path)


class TestPrecedence:
    def test_defaults(self):
        settings = config_mod.load_settings(env={})
        assert settings.llm_url == "http://localhost:11434"
        assert settings.llm_model == "llama3:8b"
        assert settings.rag_enabled is True
        assert settings.bind == "127.0.0.1:8470"

    def test_file_overrides_defaults(self, tmp_path):
        path = write_config(tmp_path, llm_url="http://file:1111", k_classifier=4)
        settings = config_mod.load_settings(config_path=path, env={})
        assert settings.llm_url == "http://file:1111"
        assert settings.k_classifier == 4

    def test_env_overrides_file(self, tmp_path):
        path = write_config(tmp_path, llm_url="http://file:1111")
        env = {"NETWORD_LLM_URL": "http://env:2222", "NETWORD_LLM_MODEL": "m-env"}
        settings = config_mod.load_settings(config_path=path, env=env)
        assert settings.llm_url == "http://env:2222"
        assert settings.llm_model == "m-env"

    def test_flags_override_env(self, tmp_path):
        path = write_config(tmp_path, llm_url="http://file:1111")
        env = {"NETWORD_LLM_URL": "http://env:2222"}
        settings = config_mod.load_settings(
            config_path=path, env=env, overrides={"llm_url": "http://flag:3333"}
        )
        assert settings.llm_url == "http://flag:3333"

    def test_config_path_from_env(self, tmp_path):
        path = write_config(tmp_path, llm_model="from-env-config")
        settings = config_mod.load_settings(env={"NETWORD_CONFIG": path})
        assert settings.llm_model == "from-env-config"

    def test_bind_env(self):
        settings = config_mod.load_settings(env={"NETWORD_BIND": "0.0.0.0:9999"})
        assert settings.bind_host == "0.0.0.0"
        assert settings.bind_port == 9999

    def test_none_overrides_ignored(self):
        settings = config_mod.load_settings(env={}, overrides={"rag_enabled": None})
        assert settings.rag_enabled is True


class TestValidation:
    def test_unknown_file_key(self, tmp_path):
        path = write_config(tmp_path, llm_urll="typo")
        with pytest.raises(NetwordError, match="unknown key.*llm_urll"):
            config_mod.load_settings(config_path=path, env={})

    def test_missing_file(self):
        with pytest.raises(NetwordError, match="not found"):
            config_mod.load_settings(config_path="/nonexistent/cfg.json", env={})

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(NetwordError, match="malformed JSON"):
            config_mod.load_settings(config_path=str(path), env={})

    def test_scripted_rules_parsed(self, tmp_path):
        path = write_config(
            tmp_path,
            backend_mode="scripted",
            scripted_rules=[
                {"match": "classifier", "response": "list", "where": "system"},
                {"match": "x", "response": "y"},
            ],
            scripted_default="dunno",
        )
        settings = config_mod.load_settings(config_path=path, env={})
        assert settings.scripted_rules[0].where == "system"
        assert settings.scripted_rules[1].where == "user"
        assert settings.scripted_default == "dunno"


class TestBuildDeps:
    def test_scripted_deps(self, tmp_path):
        path = write_config(tmp_path, backend_mode="scripted")
        settings = config_mod.load_settings(config_path=path, env={})
        deps = config_mod.build_deps(settings)
        assert isinstance(deps.backend, ScriptedBackend)
        assert len(deps.dataset) == 34
        assert len(deps.index) == 34

    def test_http_backend_default(self):
        deps = config_mod.build_deps(config_mod.load_settings(env={}))
        assert isinstance(deps.backend, HttpBackend)
        assert deps.backend.base_url == "http://localhost:11434"

    def test_allowlist_contains_exactly_backend_bases(self):
        deps = config_mod.build_deps(config_mod.load_settings(env={}))
        assert deps.transport.allowed_bases == ("http://localhost:11434",)

        remote = config_mod.load_settings(
            env={},
            overrides={
                "embedding_mode": "remote",
                "embedding_url": "http://localhost:8900/embed",
            },
        )
        # remote embedding would hit the network at index build; only
        # inspect the transport wiring via a tiny empty corpus
        empty = config_mod.load_settings(
            env={},
            overrides={
                "embedding_mode": "remote",
                "embedding_url": "http://localhost:8900/embed",
                "corpus_path": str(_empty_corpus()),
            },
        )
        deps = config_mod.build_deps(empty)
        assert deps.transport.allowed_bases == (
            "http://localhost:11434",
            "http://localhost:8900",
        )
        assert remote.embedding_url == "http://localhost:8900/embed"

    def test_custom_corpus_and_catalog(self, tmp_path, catalog, dataset):
        from netword import corpus as corpus_mod

        corpus_path = tmp_path / "corpus.jsonl"
        catalog_path = tmp_path / "catalog.json"
        corpus_mod.save_dataset(dataset, corpus_path)
        corpus_mod.save_catalog(catalog, catalog_path)
        settings = config_mod.load_settings(
            env={},
            overrides={
                "backend_mode": "scripted",
                "corpus_path": str(corpus_path),
                "catalog_path": str(catalog_path),
            },
        )
        deps = config_mod.build_deps(settings)
        assert deps.corpus_path == corpus_path
        assert deps.catalog == catalog

    def test_index_cache_used(self, tmp_path):
        cache = tmp_path / "cache.json"
        settings = config_mod.load_settings(
            env={},
            overrides={"backend_mode": "scripted", "index_cache_path": str(cache)},
        )
        config_mod.build_deps(settings)
        assert cache.exists()

    def test_generator_corpus_option(self, tmp_path):
        generator = tmp_path / "commands.jsonl"
        generator.write_text(
            '{"id": "g1", "input": "active users", "command": "list users --active now", "class": "list"}\n'
        )
        settings = config_mod.load_settings(
            env={},
            overrides={
                "backend_mode": "scripted",
                "generator_corpus_path": str(generator),
            },
        )
        deps = config_mod.build_deps(settings)
        assert deps.generator_dataset is not None
        assert deps.generator_index is not None
        assert deps.pipeline_deps().step2_index.ids == ("g1",)
        assert deps.pipeline_deps().step2_dataset.name == "generator-corpus"

    def test_pipeline_config_from_settings(self):
        settings = config_mod.load_settings(
            env={}, overrides={"backend_mode": "scripted", "k_generator": 3}
        )
        deps = config_mod.build_deps(settings)
        config = deps.pipeline_config()
        assert config.retriever.k_generator == 3
        assert deps.pipeline_config(rag_enabled=False).rag_enabled is False


def _empty_corpus():
    import tempfile
    from pathlib import Path

    path = Path(tempfile.mkdtemp()) / "empty.jsonl"
    path.write_text("")
    return path
