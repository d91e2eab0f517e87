"""HTTP API over the pipeline, corpus, and eval harness.

Versioned JSON API under /v1 with machine-readable error bodies
{code, message, details}. Interpret results are stored as pending
entries that an operator approves or rejects; approval triggers a
dry run (validation re-run plus audit event) — commands are never
executed against real network functions. Sessions, entries, audit
events, and eval reports persist in a single embedded SQLite file
(WAL journaling when file-backed). Static console assets, when built,
are served from the configured assets directory.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import corpus as corpus_mod
from . import evaluation, grammar, pipeline as pipeline_mod, retriever
from .config import Deps
from .errors import (
    BackendError,
    BackendUnreachableError,
    CorpusError,
    DatasetOverlapError,
    NetwordError,
    PipelineError,
)

DECISION_PENDING = "pending"
DECISION_APPROVED = "approved"
DECISION_REJECTED = "rejected"

_SCHEMA = """
CREATE TABLE IF NOT EXISTS sessions (
    session_id TEXT PRIMARY KEY,
    created_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS entries (
    entry_id TEXT PRIMARY KEY,
    session_id TEXT NOT NULL,
    created_at REAL NOT NULL,
    decision TEXT NOT NULL,
    decided_at REAL,
    payload TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS audit (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    ts REAL NOT NULL,
    kind TEXT NOT NULL,
    payload TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS reports (
    report_id TEXT PRIMARY KEY,
    created_at REAL NOT NULL,
    payload TEXT NOT NULL
);
"""


class Store:
    """Single-file embedded storage for sessions, entries, audit, reports."""

    def __init__(self, db_path: str | Path | None = None):
        self.path = str(db_path) if db_path else ":memory:"
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.Lock()
        with self._lock:
            if self.path != ":memory:":
                self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def ensure_session(self, session_id: str | None) -> str:
        sid = session_id or uuid.uuid4().hex
        with self._lock:
            self._conn.execute(
                "INSERT OR IGNORE INTO sessions (session_id, created_at) VALUES (?, ?)",
                (sid, time.time()),
            )
            self._conn.commit()
        return sid

    def list_sessions(self) -> list[dict]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT session_id, created_at FROM sessions ORDER BY created_at"
            ).fetchall()
        return [dict(r) for r in rows]

    def add_entry(self, entry: dict) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO entries (entry_id, session_id, created_at, decision,"
                " decided_at, payload) VALUES (?, ?, ?, ?, ?, ?)",
                (
                    entry["entry_id"],
                    entry["session_id"],
                    entry["created_at"],
                    entry["decision"],
                    entry.get("decided_at"),
                    json.dumps(entry, ensure_ascii=False),
                ),
            )
            self._conn.commit()

    def get_entry(self, entry_id: str) -> dict | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT payload FROM entries WHERE entry_id = ?", (entry_id,)
            ).fetchone()
        return json.loads(row["payload"]) if row else None

    def update_entry(self, entry: dict) -> None:
        with self._lock:
            self._conn.execute(
                "UPDATE entries SET decision = ?, decided_at = ?, payload = ?"
                " WHERE entry_id = ?",
                (
                    entry["decision"],
                    entry.get("decided_at"),
                    json.dumps(entry, ensure_ascii=False),
                    entry["entry_id"],
                ),
            )
            self._conn.commit()

    def list_entries(self, session_id: str | None = None) -> list[dict]:
        query = "SELECT payload FROM entries"
        args: tuple = ()
        if session_id is not None:
            query += " WHERE session_id = ?"
            args = (session_id,)
        query += " ORDER BY created_at"
        with self._lock:
            rows = self._conn.execute(query, args).fetchall()
        return [json.loads(r["payload"]) for r in rows]

    def audit(self, kind: str, payload: dict) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO audit (ts, kind, payload) VALUES (?, ?, ?)",
                (time.time(), kind, json.dumps(payload, ensure_ascii=False)),
            )
            self._conn.commit()

    def audit_events(self, kind: str | None = None) -> list[dict]:
        query = "SELECT seq, ts, kind, payload FROM audit"
        args: tuple = ()
        if kind is not None:
            query += " WHERE kind = ?"
            args = (kind,)
        query += " ORDER BY seq"
        with self._lock:
            rows = self._conn.execute(query, args).fetchall()
        return [
            {"seq": r["seq"], "ts": r["ts"], "kind": r["kind"],
             "payload": json.loads(r["payload"])}
            for r in rows
        ]

    def add_report(self, payload: dict) -> str:
        report_id = uuid.uuid4().hex
        with self._lock:
            self._conn.execute(
                "INSERT INTO reports (report_id, created_at, payload) VALUES (?, ?, ?)",
                (report_id, time.time(), json.dumps(payload, ensure_ascii=False)),
            )
            self._conn.commit()
        return report_id

    def list_reports(self) -> list[dict]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT report_id, created_at, payload FROM reports ORDER BY created_at"
            ).fetchall()
        return [
            {"report_id": r["report_id"], "created_at": r["created_at"],
             **json.loads(r["payload"])}
            for r in rows
        ]

    def close(self) -> None:
        with self._lock:
            self._conn.close()


class InterpretRequest(BaseModel):
    instruction: str
    session_id: str | None = None


class DecisionRequest(BaseModel):
    decision: str


class CorpusExampleRequest(BaseModel):
    model_config = {"populate_by_name": True}

    id: str | None = None
    input: str
    command: str
    class_: str = Field(alias="class")


class EvalRequest(BaseModel):
    path: str | None = None
    examples: list[dict] | None = None
    rag_enabled: bool | None = None


def _error(status: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details},
    )


def _retrieved_view(dataset: corpus_mod.Dataset, retrieved) -> list[dict]:
    view = []
    for example_id, score in retrieved:
        example = dataset.by_id(example_id)
        view.append(
            {
                "id": example_id,
                "score": score,
                "input": example.input_text,
                "command": example.command,
                "class": example.class_label,
            }
        )
    return view


def create_app(deps: Deps, store: Store | None = None) -> FastAPI:
    app = FastAPI(title="netword", version="0.1.0")
    state_lock = threading.Lock()
    store = store or Store(deps.settings.db_path or None)
    app.state.deps = deps
    app.state.store = store

    @app.exception_handler(NetwordError)
    async def _netword_error(request: Request, exc: NetwordError):
        return _error(400, "invalid_request", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError):
        return _error(400, "invalid_body", "request body failed validation", exc.errors())

    @app.get("/v1/healthz")
    def healthz():
        health = deps.backend.health()
        return {
            "status": "ok",
            "backend": {"healthy": health.healthy, "reason": health.reason},
        }

    @app.get("/v1/classes")
    def classes():
        return {
            "classes": [
                {
                    "name": c.name,
                    "description": c.description,
                    "system_prompt": c.system_prompt,
                    "base_commands": list(c.base_commands),
                    "flags": [
                        {
                            "name": f.name,
                            "arg_patterns": [list(p) for p in f.arg_patterns],
                        }
                        for f in c.flags
                    ],
                }
                for c in deps.catalog.classes
            ]
        }

    @app.get("/v1/corpus/examples")
    def corpus_examples():
        return {
            "examples": [
                {
                    "id": e.id,
                    "input": e.input_text,
                    "command": e.command,
                    "class": e.class_label,
                }
                for e in deps.dataset.examples
            ]
        }

    @app.post("/v1/corpus/examples", status_code=201)
    def corpus_add(body: CorpusExampleRequest):
        with state_lock:
            example = corpus_mod.Example(
                id=body.id or corpus_mod.next_id(deps.dataset),
                input_text=body.input,
                command=body.command,
                class_label=body.class_,
            )
            try:
                new_dataset = corpus_mod.add_example(
                    deps.dataset, example, deps.catalog
                )
            except CorpusError as exc:
                if "duplicate id" in str(exc):
                    return _error(409, "duplicate_id", str(exc))
                return _error(400, "invalid_example", str(exc))
            new_index = retriever.build_index(
                new_dataset, deps.embedder, transport=deps.transport
            )
            # Swap both references together; readers see old or new, never half.
            deps.dataset = new_dataset
            deps.index = new_index
            if deps.corpus_path is not None:
                corpus_mod.save_dataset(new_dataset, deps.corpus_path)
        store.audit("request", {"op": "corpus_add", "id": example.id})
        return {
            "id": example.id,
            "input": example.input_text,
            "command": example.command,
            "class": example.class_label,
        }

    @app.post("/v1/interpret")
    def interpret(body: InterpretRequest):
        if not body.instruction.strip():
            return _error(400, "empty_instruction", "instruction must be non-empty")
        session_id = store.ensure_session(body.session_id)
        store.audit("request", {"op": "interpret", "session_id": session_id})
        config = deps.pipeline_config()
        with state_lock:  # snapshot dataset+index together across corpus swaps
            pipeline_deps = deps.pipeline_deps()
        try:
            result = pipeline_mod.run(body.instruction, pipeline_deps, config)
        except BackendUnreachableError as exc:
            return _error(502, "backend_unreachable", str(exc), {"url": exc.url})
        except BackendError as exc:
            return _error(502, "backend_error", str(exc))
        except PipelineError as exc:
            violations = []
            if exc.extracted is not None and exc.class_name in deps.catalog:
                verdict = grammar.validate(
                    exc.extracted, deps.catalog.get(exc.class_name)
                )
                violations = [
                    {"position": v.position, "message": v.message}
                    for v in verdict.violations
                ]
            return _error(
                422,
                "generation_invalid",
                str(exc),
                {
                    "step": exc.step,
                    "raw_responses": list(exc.raw_responses),
                    "extracted": exc.extracted,
                    "class": exc.class_name,
                    "violations": violations,
                },
            )

        classification = result.trace.classification
        entry = {
            "entry_id": uuid.uuid4().hex,
            "session_id": session_id,
            "created_at": time.time(),
            "instruction": body.instruction,
            "class": result.class_name,
            "command": result.command,
            "valid": True,
            "decision": DECISION_PENDING,
            "decided_at": None,
            "dry_run": None,
            "classification": {
                "class_name": classification.class_name,
                "used_fallback": classification.used_fallback,
                "raw_response": classification.raw_response,
                "retrieved": [list(pair) for pair in classification.retrieved],
            },
            "generation": {
                "raw_response": result.raw_response,
                "retries_used": result.retries_used,
                "retrieved": [list(pair) for pair in result.retrieved],
            },
            "retrieved": _retrieved_view(pipeline_deps.step2_dataset, result.retrieved),
        }
        store.add_entry(entry)
        store.audit(
            "classify",
            {
                "entry_id": entry["entry_id"],
                "class": classification.class_name,
                "used_fallback": classification.used_fallback,
            },
        )
        store.audit(
            "generate",
            {"entry_id": entry["entry_id"], "command": result.command},
        )
        return {
            "entry_id": entry["entry_id"],
            "session_id": session_id,
            "class": result.class_name,
            "used_fallback": classification.used_fallback,
            "retrieved": entry["retrieved"],
            "command": result.command,
            "valid": True,
            "trace": {
                "raw_responses": list(result.trace.raw_responses),
                "retries_used": result.retries_used,
                "classifier_retrieved": [
                    list(pair) for pair in classification.retrieved
                ],
            },
        }

    @app.post("/v1/entries/{entry_id}/decision")
    def decide(entry_id: str, body: DecisionRequest):
        if body.decision not in (DECISION_APPROVED, DECISION_REJECTED):
            return _error(
                400,
                "invalid_decision",
                f"decision must be '{DECISION_APPROVED}' or '{DECISION_REJECTED}'",
            )
        entry = store.get_entry(entry_id)
        if entry is None:
            return _error(404, "unknown_entry", f"no entry {entry_id!r}")
        if entry["decision"] != DECISION_PENDING:
            return _error(
                409, "already_decided", f"entry already {entry['decision']}"
            )
        entry["decision"] = body.decision
        entry["decided_at"] = time.time()
        if body.decision == DECISION_APPROVED:
            verdict = grammar.validate(
                entry["command"], deps.catalog.get(entry["class"])
            )
            entry["dry_run"] = {
                "validated": verdict.ok,
                "violations": [
                    {"position": v.position, "message": v.message}
                    for v in verdict.violations
                ],
                "executed": False,
            }
            store.update_entry(entry)
            store.audit(
                "approve", {"entry_id": entry_id, "dry_run": entry["dry_run"]}
            )
        else:
            store.update_entry(entry)
            store.audit("reject", {"entry_id": entry_id})
        return entry

    @app.get("/v1/entries/{entry_id}")
    def get_entry(entry_id: str):
        entry = store.get_entry(entry_id)
        if entry is None:
            return _error(404, "unknown_entry", f"no entry {entry_id!r}")
        return entry

    @app.get("/v1/sessions")
    def sessions():
        return {"sessions": store.list_sessions()}

    @app.get("/v1/sessions/{session_id}")
    def session_entries(session_id: str):
        return {"session_id": session_id, "entries": store.list_entries(session_id)}

    @app.post("/v1/eval")
    def run_eval(body: EvalRequest):
        try:
            if body.path:
                eval_dataset = corpus_mod.load_dataset(
                    body.path, deps.catalog, split=corpus_mod.SPLIT_EVAL
                )
            elif body.examples:
                examples = []
                for e in body.examples:
                    example = corpus_mod.Example(
                        id=e["id"],
                        input_text=e["input"],
                        command=e["command"],
                        class_label=e["class"],
                    )
                    corpus_mod.validate_example(example, deps.catalog)
                    examples.append(example)
                eval_dataset = corpus_mod.Dataset(
                    examples=tuple(examples), name="inline", split=corpus_mod.SPLIT_EVAL
                )
            else:
                return _error(400, "missing_dataset", "provide 'path' or 'examples'")
            config = deps.pipeline_config(rag_enabled=body.rag_enabled)
            report = evaluation.evaluate(eval_dataset, deps.pipeline_deps(), config)
        except DatasetOverlapError as exc:
            return _error(400, "dataset_overlap", str(exc), {"ids": list(exc.ids)})
        except BackendUnreachableError as exc:
            return _error(502, "backend_unreachable", str(exc), {"url": exc.url})
        except BackendError as exc:
            return _error(502, "backend_error", str(exc))
        except (CorpusError, NetwordError) as exc:
            return _error(400, "invalid_dataset", str(exc))
        doc = json.loads(evaluation.emit_report(report, format="machine"))
        report_id = store.add_report(doc)
        store.audit("eval", {"report_id": report_id, "n": report.n})
        return {"report_id": report_id, **doc}

    @app.get("/v1/eval/reports")
    def eval_reports():
        return {"reports": store.list_reports()}

    assets = Path(deps.settings.assets_dir) if deps.settings.assets_dir else None
    if assets and assets.is_dir():
        app.mount("/", StaticFiles(directory=str(assets), html=True), name="console")

    return app
