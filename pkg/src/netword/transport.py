"""HTTP transport restricted to an explicit allowlist of base URLs.

Every outbound request this package makes (LLM generation, remote
embeddings) goes through a LocalTransport whose allowlist contains
exactly the configured backend base URLs. Nothing else can leave the
host: a URL outside the allowlist is rejected before any socket opens.
"""

from __future__ import annotations

from urllib.parse import urlsplit

import requests

from .errors import EgressError


def base_of(url: str) -> str:
    """scheme://host:port part of a URL, lowercased."""
    parts = urlsplit(url)
    if not parts.scheme or not parts.netloc:
        raise EgressError(f"not an absolute http(s) URL: {url!r}")
    return f"{parts.scheme.lower()}://{parts.netloc.lower()}"


class LocalTransport:
    """JSON-over-HTTP client that refuses non-allowlisted destinations."""

    def __init__(self, allowed_bases: list[str] | tuple[str, ...], timeout: float = 120.0):
        self.allowed_bases = tuple(sorted({base_of(u) for u in allowed_bases}))
        self.timeout = timeout
        self._session = requests.Session()
        # Proxies could route "local" traffic elsewhere; never use them.
        self._session.trust_env = False

    def _check(self, url: str) -> None:
        if base_of(url) not in self.allowed_bases:
            raise EgressError(
                f"blocked outbound request to {url!r}:"
                f" not in allowlist {list(self.allowed_bases)}"
            )

    def post_json(self, url: str, payload: dict, timeout: float | None = None) -> dict:
        self._check(url)
        response = self._session.post(url, json=payload, timeout=timeout or self.timeout)
        response.raise_for_status()
        return response.json()

    def get_json(self, url: str, timeout: float | None = None) -> dict:
        self._check(url)
        response = self._session.get(url, timeout=timeout or self.timeout)
        response.raise_for_status()
        return response.json()
