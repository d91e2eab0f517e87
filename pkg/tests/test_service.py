from __future__ import annotations

import socket

import pytest
from fastapi.testclient import TestClient

from netword import config as config_mod
from netword import corpus as corpus_mod
from netword.backends import HttpBackend, ScriptedBackend, ScriptedRule
from netword.service import Store, create_app

from conftest import FIXTURES
from helpers import OracleBackend

DEMO_INSTRUCTION = "Could you please give me the list of active users since 2 March."
DEMO_COMMAND = "list users --active 20240301 now"


def scripted_settings(**overrides):
    return config_mod.load_settings(env={}, overrides={"backend_mode": "scripted", **overrides})


def make_client(backend=None, **overrides) -> TestClient:
    settings = scripted_settings(**overrides)
    deps = config_mod.build_deps(settings)
    if backend is not None:
        deps.backend = backend
    return TestClient(create_app(deps, Store()))


@pytest.fixture
def demo_client():
    backend = ScriptedBackend(
        rules=(
            ScriptedRule(match="You are a classifier", response="Answer:\nlist", where="system"),
            ScriptedRule(match="You are assistant", response=f"Answer:\n{DEMO_COMMAND}", where="system"),
        )
    )
    return make_client(backend=backend)


def closed_port() -> int:
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


class TestInterpret:
    def test_interpret_happy_path(self, demo_client):
        response = demo_client.post("/v1/interpret", json={"instruction": DEMO_INSTRUCTION})
        assert response.status_code == 200
        body = response.json()
        assert body["command"] == DEMO_COMMAND
        assert body["class"] == "list"
        assert body["valid"] is True
        assert body["entry_id"]
        assert body["session_id"]
        assert len(body["retrieved"]) == 5
        top = body["retrieved"][0]
        assert set(top) == {"id", "score", "input", "command", "class"}
        assert body["trace"]["raw_responses"] == ["Answer:\nlist", f"Answer:\n{DEMO_COMMAND}"]

    def test_empty_instruction_400(self, demo_client):
        response = demo_client.post("/v1/interpret", json={"instruction": "   "})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_instruction"

    def test_backend_down_502_names_url(self):
        url = f"http://127.0.0.1:{closed_port()}"
        client = make_client(backend=HttpBackend(base_url=url))
        response = client.post("/v1/interpret", json={"instruction": "list the users"})
        assert response.status_code == 502
        body = response.json()
        assert body["code"] == "backend_unreachable"
        assert url in body["message"]

    def test_invalid_generation_422_carries_raw_responses(self):
        backend = ScriptedBackend(
            rules=(
                ScriptedRule(match="You are a classifier", response="Answer:\nlist", where="system"),
            ),
            default_response="Answer:\nlist userz",
        )
        client = make_client(backend=backend)
        response = client.post("/v1/interpret", json={"instruction": "list the users"})
        assert response.status_code == 422
        details = response.json()["details"]
        assert details["step"] == "generate"
        assert len(details["raw_responses"]) == 3
        assert details["extracted"] == "list userz"
        assert details["violations"]
        assert "unknown object" in details["violations"][0]["message"]

    def test_audit_events_for_success(self, demo_client):
        response = demo_client.post("/v1/interpret", json={"instruction": DEMO_INSTRUCTION})
        entry_id = response.json()["entry_id"]
        store = demo_client.app.state.store
        kinds = {e["kind"]: e for e in store.audit_events()}
        assert kinds["classify"]["payload"]["entry_id"] == entry_id
        assert kinds["generate"]["payload"]["entry_id"] == entry_id

    def test_session_reuse(self, demo_client):
        first = demo_client.post("/v1/interpret", json={"instruction": DEMO_INSTRUCTION})
        session_id = first.json()["session_id"]
        second = demo_client.post(
            "/v1/interpret",
            json={"instruction": DEMO_INSTRUCTION, "session_id": session_id},
        )
        assert second.json()["session_id"] == session_id
        entries = demo_client.get(f"/v1/sessions/{session_id}").json()["entries"]
        assert len(entries) == 2
        assert all(e["decision"] == "pending" for e in entries)


class TestDecision:
    def entry(self, client) -> str:
        response = client.post("/v1/interpret", json={"instruction": DEMO_INSTRUCTION})
        return response.json()["entry_id"]

    def test_approve_records_dry_run(self, demo_client):
        entry_id = self.entry(demo_client)
        response = demo_client.post(
            f"/v1/entries/{entry_id}/decision", json={"decision": "approved"}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["decision"] == "approved"
        assert body["dry_run"]["validated"] is True
        assert body["dry_run"]["executed"] is False
        kinds = [e["kind"] for e in demo_client.app.state.store.audit_events()]
        assert "approve" in kinds

    def test_double_decision_409(self, demo_client):
        entry_id = self.entry(demo_client)
        demo_client.post(f"/v1/entries/{entry_id}/decision", json={"decision": "approved"})
        again = demo_client.post(
            f"/v1/entries/{entry_id}/decision", json={"decision": "approved"}
        )
        assert again.status_code == 409
        assert again.json()["code"] == "already_decided"

    def test_reject_has_no_dry_run(self, demo_client):
        entry_id = self.entry(demo_client)
        body = demo_client.post(
            f"/v1/entries/{entry_id}/decision", json={"decision": "rejected"}
        ).json()
        assert body["decision"] == "rejected"
        assert body["dry_run"] is None

    def test_unknown_entry_404(self, demo_client):
        response = demo_client.post(
            "/v1/entries/nope/decision", json={"decision": "approved"}
        )
        assert response.status_code == 404

    def test_invalid_decision_400(self, demo_client):
        entry_id = self.entry(demo_client)
        response = demo_client.post(
            f"/v1/entries/{entry_id}/decision", json={"decision": "maybe"}
        )
        assert response.status_code == 400

    def test_entry_fetch_reflects_state(self, demo_client):
        entry_id = self.entry(demo_client)
        demo_client.post(f"/v1/entries/{entry_id}/decision", json={"decision": "approved"})
        entry = demo_client.get(f"/v1/entries/{entry_id}").json()
        assert entry["decision"] == "approved"
        assert entry["command"] == DEMO_COMMAND


class TestCatalogAndCorpus:
    def test_classes_lists_eleven(self, demo_client):
        body = demo_client.get("/v1/classes").json()
        assert len(body["classes"]) == 11
        names = [c["name"] for c in body["classes"]]
        assert names[:2] == ["user", "list"]

    def test_corpus_listing(self, demo_client):
        body = demo_client.get("/v1/corpus/examples").json()
        assert len(body["examples"]) == 34
        assert body["examples"][0]["id"] == "c001"

    def test_post_valid_example_rebuilds_index(self, demo_client):
        response = demo_client.post(
            "/v1/corpus/examples",
            json={
                "input": "Show gnb seven status",
                "command": "status gnb --name gnb7",
                "class": "status",
            },
        )
        assert response.status_code == 201
        assert response.json()["id"] == "ex0035"
        assert len(demo_client.get("/v1/corpus/examples").json()["examples"]) == 35
        deps = demo_client.app.state.deps
        assert len(deps.index) == 35

    def test_post_invalid_grammar_400(self, demo_client):
        response = demo_client.post(
            "/v1/corpus/examples",
            json={"input": "x", "command": "status gnbz", "class": "status"},
        )
        assert response.status_code == 400
        assert "grammar" in response.json()["message"]

    def test_post_duplicate_id_409(self, demo_client):
        response = demo_client.post(
            "/v1/corpus/examples",
            json={"id": "c001", "input": "x", "command": "list users", "class": "list"},
        )
        assert response.status_code == 409

    def test_post_persists_when_file_backed(self, tmp_path, dataset):
        corpus_path = tmp_path / "corpus.jsonl"
        corpus_mod.save_dataset(dataset, corpus_path)
        client = make_client(
            backend=ScriptedBackend(), corpus_path=str(corpus_path)
        )
        client.post(
            "/v1/corpus/examples",
            json={"input": "all nodes please", "command": "list nodes", "class": "list"},
        )
        reloaded = corpus_mod.load_dataset(
            corpus_path, corpus_mod.default_catalog()
        )
        assert len(reloaded) == 35


class TestEvalEndpoint:
    def test_eval_with_oracle_backend(self, eval_dataset):
        client = make_client(backend=OracleBackend.for_dataset(eval_dataset))
        response = client.post(
            "/v1/eval", json={"path": str(FIXTURES / "eval25.jsonl")}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["accuracy"] == 1.0
        assert body["mean_unigram_precision"] == 1.0
        assert body["n"] == 25
        reports = client.get("/v1/eval/reports").json()["reports"]
        assert len(reports) == 1
        assert reports[0]["report_id"] == body["report_id"]

    def test_eval_overlap_400(self, demo_client, dataset):
        inline = [
            {"id": e.id, "input": e.input_text, "command": e.command, "class": e.class_label}
            for e in dataset.examples[:2]
        ]
        response = demo_client.post("/v1/eval", json={"examples": inline})
        assert response.status_code == 400
        assert response.json()["code"] == "dataset_overlap"

    def test_eval_missing_dataset_400(self, demo_client):
        response = demo_client.post("/v1/eval", json={})
        assert response.status_code == 400
        assert response.json()["code"] == "missing_dataset"

    def test_eval_backend_down_502(self, tmp_path):
        url = f"http://127.0.0.1:{closed_port()}"
        client = make_client(backend=HttpBackend(base_url=url))
        response = client.post(
            "/v1/eval", json={"path": str(FIXTURES / "eval25.jsonl")}
        )
        assert response.status_code == 502


class TestHealthz:
    def test_scripted_healthy(self, demo_client):
        body = demo_client.get("/v1/healthz").json()
        assert body["status"] == "ok"
        assert body["backend"]["healthy"] is True

    def test_http_backend_down_reported_verbatim(self):
        url = f"http://127.0.0.1:{closed_port()}"
        client = make_client(backend=HttpBackend(base_url=url))
        body = client.get("/v1/healthz").json()
        assert body["status"] == "ok"
        assert body["backend"]["healthy"] is False
        assert "connection refused" in body["backend"]["reason"]


class TestStorePersistence:
    def test_file_backed_store_survives_reopen(self, tmp_path):
        db = tmp_path / "sessions.db"
        store = Store(db)
        sid = store.ensure_session(None)
        store.audit("request", {"op": "x"})
        store.close()
        reopened = Store(db)
        assert [s["session_id"] for s in reopened.list_sessions()] == [sid]
        assert reopened.audit_events()[0]["payload"] == {"op": "x"}
        reopened.close()
