"""Exception hierarchy shared across the package."""

from __future__ import annotations


class NetwordError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(NetwordError):
    """A corpus file or record failed validation.

    ``line`` is the 1-based line number in the source file when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CatalogError(NetwordError):
    """A class-catalog file failed validation."""


class ParseError(NetwordError):
    """A command does not conform to its class grammar.

    ``position`` is a character offset into the whitespace-normalized
    command text, pointing at the offending token.
    """

    def __init__(self, message: str, position: int = 0):
        self.position = position
        super().__init__(message)


class EmbeddingError(NetwordError):
    """Embedding a text failed (remote endpoint or response shape)."""


class EgressError(NetwordError):
    """An HTTP request targeted a URL outside the configured allowlist."""


class BackendError(NetwordError):
    """The inference backend failed (protocol error, HTTP error, timeout)."""


class BackendUnreachableError(BackendError):
    """The inference server did not accept a connection."""

    def __init__(self, url: str):
        self.url = url
        super().__init__(f"inference server unreachable at {url}")


class ExtractionError(NetwordError):
    """No command candidate could be extracted from a model response."""


class PipelineError(NetwordError):
    """A pipeline step failed.

    Carries enough context for the evaluation harness to keep scoring:
    the step name, every raw model response seen, the last extracted
    candidate (if any), and the class chosen by step 1 (if it got that far).
    """

    def __init__(
        self,
        step: str,
        message: str,
        raw_responses: tuple[str, ...] = (),
        extracted: str | None = None,
        class_name: str | None = None,
    ):
        self.step = step
        self.message = message
        self.raw_responses = raw_responses
        self.extracted = extracted
        self.class_name = class_name
        super().__init__(f"{step}: {message}")


class DatasetOverlapError(NetwordError):
    """An eval dataset shares ids with the retrieval corpus."""

    def __init__(self, ids: tuple[str, ...]):
        self.ids = ids
        super().__init__(
            "eval dataset overlaps the retrieval corpus by id: " + ", ".join(ids)
        )
