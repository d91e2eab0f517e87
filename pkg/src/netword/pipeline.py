"""Two-step translation: classify the request, then generate a command.

Step 1 retrieves the most similar corpus examples, shows them with their
class labels, and asks the model for the class. Step 2 retrieves
examples of that class, shows them as input/command pairs under the
class's system prompt, asks the model for the command, extracts the
command from the raw completion, and validates it under the class
grammar. A command only ever leaves this module in canonical, validated
form; invalid output is an error, not a result.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
import re

from . import grammar, retriever
from .backends import GenerationRequest
from .corpus import ClassCatalog, CommandClass, Dataset
from .embedding import EmbedderConfig
from .errors import BackendError, ExtractionError, ParseError, PipelineError
from .prompting import SampleBlock, build_classifier_prompt, build_generator_prompt
from .retriever import RetrieverConfig, VectorIndex
from .transport import LocalTransport

# Appended to the user text when the first completion failed validation.
RETRY_SUFFIX = "Output only the command."

_ANSWER_ANCHOR = re.compile(r"answer\s*:", re.IGNORECASE)
_FENCE = re.compile(r"```(.*?)```", re.DOTALL)
_LANG_TAG = re.compile(r"^[A-Za-z0-9_+-]*$")


@dataclass(frozen=True)
class PipelineConfig:
    retriever: RetrieverConfig = field(default_factory=RetrieverConfig)
    rag_enabled: bool = True
    retry_on_invalid: bool = True


@dataclass(frozen=True)
class PipelineDeps:
    """Shared immutable dependencies for pipeline runs.

    Step 2 normally retrieves from the same corpus as step 1, filtered by
    class; deployments that keep a separate command corpus set
    generator_dataset/generator_index and step 2 searches those instead.
    """

    catalog: ClassCatalog
    dataset: Dataset
    index: VectorIndex
    embedder: EmbedderConfig
    backend: object
    transport: LocalTransport | None = None
    generator_dataset: Dataset | None = None
    generator_index: VectorIndex | None = None

    @property
    def step2_dataset(self) -> Dataset:
        return self.generator_dataset or self.dataset

    @property
    def step2_index(self) -> VectorIndex:
        return self.generator_index or self.index


@dataclass(frozen=True)
class ClassificationResult:
    class_name: str
    retrieved: tuple[tuple[str, float], ...]
    raw_response: str
    used_fallback: bool


@dataclass(frozen=True)
class RunTrace:
    classification: ClassificationResult
    raw_responses: tuple[str, ...]


@dataclass
class GenerationResult:
    command: str
    ast: grammar.CommandAst
    class_name: str
    retrieved: tuple[tuple[str, float], ...]
    raw_response: str
    retries_used: int
    trace: RunTrace | None = None


def normalize_class_response(raw: str) -> str:
    """Reduce a raw completion to a candidate class name.

    Takes the text after the last "Answer:" anchor (if any), then the
    last non-empty line, lowercased, with surrounding punctuation and
    whitespace stripped.
    """
    text = raw
    matches = list(_ANSWER_ANCHOR.finditer(text))
    if matches:
        text = text[matches[-1].end() :]
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        return ""
    return re.sub(r"^[^a-z0-9]+|[^a-z0-9]+$", "", lines[-1].lower())


def _majority_class(
    retrieved: tuple[tuple[str, float], ...], index: VectorIndex
) -> str | None:
    """Most frequent class among retrieved ids; ties go to the best-ranked."""
    labels_by_id = {e.example_id: e.class_label for e in index.entries}
    labels = [labels_by_id[rid] for rid, _ in retrieved if rid in labels_by_id]
    if not labels:
        return None
    counts = Counter(labels)
    top = max(counts.values())
    for label in labels:  # retrieval rank order
        if counts[label] == top:
            return label
    return None


def _call_backend(deps: PipelineDeps, system_text: str, user_text: str, step: str) -> str:
    request = GenerationRequest(system_text=system_text, user_text=user_text)
    try:
        return deps.backend.generate(request).text
    except BackendError:
        raise
    except PipelineError:
        raise
    except Exception as exc:  # backend double misbehaving, not a pipeline state
        raise PipelineError(step, f"backend failed: {exc}") from exc


def classify(
    instruction: str, deps: PipelineDeps, config: PipelineConfig
) -> ClassificationResult:
    """Step 1: choose the command class for an instruction."""
    instruction = instruction.strip()
    if not instruction:
        raise PipelineError("classify", "empty instruction")

    retrieved: tuple[tuple[str, float], ...] = ()
    samples = SampleBlock()
    if config.rag_enabled:
        hits = retriever.top_k(
            deps.index,
            instruction,
            deps.embedder,
            k=config.retriever.k_classifier,
            transport=deps.transport,
        )
        retrieved = tuple(hits)
        samples = SampleBlock(
            entries=tuple(
                (deps.dataset.by_id(rid).input_text, deps.dataset.by_id(rid).class_label)
                for rid, _ in hits
            )
        )

    prompt = build_classifier_prompt(
        deps.catalog, instruction, samples, rag_enabled=config.rag_enabled
    )
    raw = _call_backend(deps, prompt.system_text, prompt.user_text, "classify")

    name = normalize_class_response(raw)
    if name in deps.catalog:
        return ClassificationResult(
            class_name=name, retrieved=retrieved, raw_response=raw, used_fallback=False
        )

    fallback = _majority_class(retrieved, deps.index)
    if fallback is None:
        raise PipelineError(
            "classify",
            f"unclassifiable response {raw!r} and no retrieved samples to fall back on",
            raw_responses=(raw,),
        )
    return ClassificationResult(
        class_name=fallback, retrieved=retrieved, raw_response=raw, used_fallback=True
    )


def extract_command(raw_response: str, command_class: CommandClass) -> str:
    """Pull the command candidate out of a raw completion.

    Selection order: (1) content of the first fenced code block, (2) the
    first non-empty line after the last "Answer:" anchor, (3) the last
    line starting with one of the class's base-command verbs. En/em
    dashes canonicalize to "--". Validation is the caller's job.
    """
    text = grammar.canonicalize_dashes(raw_response)

    fence = _FENCE.search(text)
    if fence:
        content = fence.group(1)
        lines = content.split("\n")
        if len(lines) > 1 and _LANG_TAG.fullmatch(lines[0].strip()):
            content = "\n".join(lines[1:])
        content = content.strip()
        if content:
            return content

    matches = list(_ANSWER_ANCHOR.finditer(text))
    if matches:
        tail = text[matches[-1].end() :]
        for line in tail.splitlines():
            if line.strip():
                return line.strip()

    verbs = grammar.base_verbs(command_class)
    candidate = None
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and stripped.split(" ", 1)[0] in verbs:
            candidate = stripped
    if candidate:
        return candidate

    raise ExtractionError(
        f"no command candidate found for class {command_class.name!r}"
    )


def generate_command(
    instruction: str,
    class_name: str,
    deps: PipelineDeps,
    config: PipelineConfig,
) -> GenerationResult:
    """Step 2: generate, extract, validate, and canonicalize the command."""
    instruction = instruction.strip()
    if class_name not in deps.catalog:
        raise PipelineError("generate", f"unknown class {class_name!r}")
    command_class = deps.catalog.get(class_name)

    retrieved: tuple[tuple[str, float], ...] = ()
    samples = SampleBlock()
    if config.rag_enabled:
        hits = retriever.top_k(
            deps.step2_index,
            instruction,
            deps.embedder,
            k=config.retriever.k_generator,
            class_filter=class_name,
            transport=deps.transport,
        )
        retrieved = tuple(hits)
        samples = SampleBlock(
            entries=tuple(
                (
                    deps.step2_dataset.by_id(rid).input_text,
                    deps.step2_dataset.by_id(rid).command,
                )
                for rid, _ in hits
            )
        )

    prompt = build_generator_prompt(
        command_class, instruction, samples, rag_enabled=config.rag_enabled
    )

    raw_responses: list[str] = []
    last_candidate: str | None = None
    last_error: Exception | None = None
    max_attempts = 2 if config.retry_on_invalid else 1
    for attempt in range(max_attempts):
        user_text = prompt.user_text
        if attempt > 0:
            user_text = f"{user_text}\n{RETRY_SUFFIX}"
        raw = _call_backend(deps, prompt.system_text, user_text, "generate")
        raw_responses.append(raw)
        try:
            candidate = extract_command(raw, command_class)
        except ExtractionError as exc:
            last_error = exc
            continue
        last_candidate = candidate
        try:
            ast = grammar.parse(candidate, command_class)
        except ParseError as exc:
            last_error = exc
            continue
        return GenerationResult(
            command=grammar.render(ast),
            ast=ast,
            class_name=class_name,
            retrieved=retrieved,
            raw_response=raw,
            retries_used=attempt,
        )

    raise PipelineError(
        "generate",
        f"no valid command after {len(raw_responses)} attempt(s): {last_error}",
        raw_responses=tuple(raw_responses),
        extracted=last_candidate,
        class_name=class_name,
    )


def run(
    instruction: str, deps: PipelineDeps, config: PipelineConfig
) -> GenerationResult:
    """Full pipeline: classify then generate; the trace carries both steps."""
    classification = classify(instruction, deps, config)
    try:
        result = generate_command(
            instruction, classification.class_name, deps, config
        )
    except PipelineError as exc:
        raise PipelineError(
            exc.step,
            exc.message,
            raw_responses=(classification.raw_response,) + exc.raw_responses,
            extracted=exc.extracted,
            class_name=classification.class_name,
        ) from exc
    result.trace = RunTrace(
        classification=classification,
        raw_responses=(classification.raw_response, result.raw_response),
    )
    return result
