"""Inference backends: a local HTTP server client and a scripted double.

The HTTP backend speaks the de facto local-runner wire protocol:
POST /api/generate with {model, system, prompt, stream: false, options}
returning a JSON body whose "response" field holds the completion, and
GET /api/tags listing available models. No cloud client exists on
purpose: requests never leave the host except to the configured local
base URLs. The scripted backend answers from ordered substring rules so
the whole pipeline is testable offline and deterministically.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import requests

from .errors import BackendError, BackendUnreachableError
from .transport import LocalTransport

DEFAULT_BASE_URL = "http://localhost:11434"
DEFAULT_MODEL = "llama3:8b"
DEFAULT_TIMEOUT = 120.0


@dataclass(frozen=True)
class GenerationRequest:
    system_text: str
    user_text: str
    model_name: str = ""
    temperature: float = 0.0
    seed: int | None = None
    max_tokens: int = 256

    def __post_init__(self):
        if not (self.temperature == self.temperature and self.temperature >= 0):
            raise ValueError(f"temperature must be finite and >= 0: {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1: {self.max_tokens}")


@dataclass(frozen=True)
class GenerationResponse:
    text: str
    latency_ms: int
    backend_id: str


@dataclass(frozen=True)
class Health:
    healthy: bool
    reason: str | None = None


class HttpBackend:
    """Client for a local inference server.

    Deterministic output is requested from the server via temperature 0
    and a fixed seed; it is asserted only for the scripted backend.
    """

    def __init__(
        self,
        base_url: str = DEFAULT_BASE_URL,
        model_name: str = DEFAULT_MODEL,
        transport: LocalTransport | None = None,
        timeout: float = DEFAULT_TIMEOUT,
    ):
        self.base_url = base_url.rstrip("/")
        self.model_name = model_name
        self.timeout = timeout
        self.transport = transport or LocalTransport(
            allowed_bases=[self.base_url], timeout=timeout
        )

    @property
    def backend_id(self) -> str:
        return self.model_name

    def _post_generate(self, payload: dict) -> dict:
        # One retry on timeout only; a refused connection is never
        # retried (the server is down, retrying would hide it).
        url = f"{self.base_url}/api/generate"
        for attempt in (1, 2):
            try:
                return self.transport.post_json(url, payload, timeout=self.timeout)
            except requests.exceptions.ConnectionError as exc:
                raise BackendUnreachableError(self.base_url) from exc
            except requests.exceptions.Timeout as exc:
                if attempt == 2:
                    raise BackendError(
                        f"inference server timed out twice after {self.timeout}s at {url}"
                    ) from exc
            except requests.exceptions.HTTPError as exc:
                status = exc.response.status_code if exc.response is not None else "?"
                raise BackendError(
                    f"inference server returned HTTP {status} at {url}"
                ) from exc
            except (requests.exceptions.RequestException, ValueError) as exc:
                raise BackendError(f"inference request failed at {url}: {exc}") from exc
        raise AssertionError("unreachable")

    def generate(self, request: GenerationRequest) -> GenerationResponse:
        options: dict = {
            "temperature": request.temperature,
            "num_predict": request.max_tokens,
        }
        if request.seed is not None:
            options["seed"] = request.seed
        payload = {
            "model": request.model_name or self.model_name,
            "system": request.system_text,
            "prompt": request.user_text,
            "stream": False,
            "options": options,
        }
        started = time.monotonic()
        body = self._post_generate(payload)
        elapsed_ms = int((time.monotonic() - started) * 1000)
        if "response" not in body:
            raise BackendError(
                f"inference server response missing 'response' field"
                f" (got keys: {sorted(body)})"
            )
        return GenerationResponse(
            text=body["response"],
            latency_ms=elapsed_ms,
            backend_id=payload["model"],
        )

    def health(self) -> Health:
        url = f"{self.base_url}/api/tags"
        try:
            body = self.transport.get_json(url, timeout=min(self.timeout, 10.0))
        except requests.exceptions.ConnectionError:
            return Health(healthy=False, reason=f"connection refused at {self.base_url}")
        except Exception as exc:
            return Health(healthy=False, reason=f"model list probe failed: {exc}")
        models = [m.get("name", "") for m in body.get("models", [])]
        if self.model_name not in models:
            return Health(
                healthy=False,
                reason=f"model {self.model_name!r} not present on server"
                f" (available: {', '.join(models) or 'none'})",
            )
        return Health(healthy=True)


@dataclass(frozen=True)
class ScriptedRule:
    """First matching rule wins; matching is substring-based.

    ``where`` selects the match target: "user" (default), "system", or
    "any". Classifier and generator prompts share identical user text in
    no-rag mode, so step-specific rules match on the system text.
    """

    match: str
    response: str
    where: str = "user"

    def applies(self, request: GenerationRequest) -> bool:
        if self.where == "user":
            return self.match in request.user_text
        if self.where == "system":
            return self.match in request.system_text
        if self.where == "any":
            return self.match in request.user_text or self.match in request.system_text
        raise ValueError(f"unknown rule scope {self.where!r}")


@dataclass
class ScriptedBackend:
    """Deterministic offline backend; records every request it serves."""

    rules: tuple[ScriptedRule, ...] = ()
    default_response: str = ""
    calls: list[GenerationRequest] = field(default_factory=list)

    backend_id = "scripted"
    model_name = "scripted"

    @property
    def call_count(self) -> int:
        return len(self.calls)

    def generate(self, request: GenerationRequest) -> GenerationResponse:
        self.calls.append(request)
        for rule in self.rules:
            if rule.applies(request):
                return GenerationResponse(
                    text=rule.response, latency_ms=0, backend_id=self.backend_id
                )
        return GenerationResponse(
            text=self.default_response, latency_ms=0, backend_id=self.backend_id
        )

    def health(self) -> Health:
        return Health(healthy=True)
