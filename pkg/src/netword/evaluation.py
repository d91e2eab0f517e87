"""Accuracy and uni-gram precision over a dataset, with report rendering.

Both metrics share one normalization: trim, collapse whitespace runs,
canonicalize en/em dashes; comparison stays case-sensitive. Exact match
requires the whole normalized output to equal the ground truth — one
token off counts as wrong. Uni-gram precision is the fraction of output
tokens (as a set) that also occur in the ground-truth token set; flag
order therefore does not matter. A multiset-clipped variant is available
for sensitivity analysis but the set semantics are the default.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from . import pipeline as pipeline_mod
from .corpus import Dataset
from .errors import BackendError, DatasetOverlapError, NetwordError, PipelineError
from .grammar import canonicalize_dashes

SCHEMA_VERSION = 1

PRECISION_SET = "set"
PRECISION_CLIPPED = "clipped"

# Predicted-class key used when classification itself failed.
UNCLASSIFIED = "(none)"


def normalize(text: str) -> str:
    """Shared metric normalization: dashes, trim, collapse whitespace."""
    return " ".join(canonicalize_dashes(text).split())


def tokens(text: str) -> list[str]:
    return normalize(text).split(" ") if normalize(text) else []


def token_bag(text: str) -> set[str]:
    """Whitespace-delimited, case-sensitive token set."""
    return set(tokens(text))


def exact_match(output: str, ground_truth: str) -> bool:
    return normalize(output) == normalize(ground_truth)


def unigram_precision(
    output: str, ground_truth: str, mode: str = PRECISION_SET
) -> float:
    """Proportion of output tokens found in the ground truth.

    Set semantics by default (duplicates collapse in both operands);
    ``mode="clipped"`` counts duplicates up to their ground-truth
    multiplicity, BLEU-1 style. Empty output scores 0.0.
    """
    out_tokens = tokens(output)
    if not out_tokens:
        return 0.0
    if mode == PRECISION_SET:
        out_set = set(out_tokens)
        return len(out_set & token_bag(ground_truth)) / len(out_set)
    if mode == PRECISION_CLIPPED:
        truth_counts = Counter(tokens(ground_truth))
        out_counts = Counter(out_tokens)
        clipped = sum(min(n, truth_counts[t]) for t, n in out_counts.items())
        return clipped / len(out_tokens)
    raise ValueError(f"unknown precision mode {mode!r}")


@dataclass(frozen=True)
class SampleScore:
    example_id: str
    exact_match: bool
    unigram_precision: float
    predicted_class: str
    predicted_command: str


@dataclass(frozen=True)
class ClassStats:
    accuracy: float
    precision: float
    n: int


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    mean_unigram_precision: float
    n: int
    per_class: dict[str, ClassStats] = field(default_factory=dict)
    confusion: dict[tuple[str, str], int] = field(default_factory=dict)
    config_snapshot: dict = field(default_factory=dict)


def _score_example(example, deps, config, precision_mode) -> SampleScore:
    try:
        result = pipeline_mod.run(example.input_text, deps, config)
        predicted = result.command
        predicted_class = result.class_name
    except PipelineError as exc:
        predicted = exc.extracted or ""
        predicted_class = exc.class_name or UNCLASSIFIED
    return SampleScore(
        example_id=example.id,
        exact_match=exact_match(predicted, example.command),
        unigram_precision=unigram_precision(predicted, example.command, precision_mode),
        predicted_class=predicted_class,
        predicted_command=predicted,
    )


def evaluate(
    dataset: Dataset,
    deps: pipeline_mod.PipelineDeps,
    config: pipeline_mod.PipelineConfig,
    precision_mode: str = PRECISION_SET,
) -> EvalReport:
    """Run the pipeline over every example and aggregate both metrics.

    Pipeline errors score exact_match False; their precision is computed
    over the extracted candidate when one exists, else 0. Aggregation
    sorts per-sample scores by example id, so dataset order never
    changes the report.
    """
    if not dataset.examples:
        raise NetwordError("cannot evaluate an empty dataset")
    corpus_ids = set(deps.index.ids) | set(deps.step2_index.ids)
    overlap = tuple(sorted(set(dataset.ids) & corpus_ids))
    if overlap:
        raise DatasetOverlapError(overlap)
    health = deps.backend.health()
    if not health.healthy:
        raise BackendError(f"backend unavailable: {health.reason}")

    truth_class = {e.id: e.class_label for e in dataset.examples}
    scores = sorted(
        (_score_example(e, deps, config, precision_mode) for e in dataset.examples),
        key=lambda s: s.example_id,
    )

    n = len(scores)
    accuracy = sum(s.exact_match for s in scores) / n
    mean_precision = sum(s.unigram_precision for s in scores) / n

    per_class: dict[str, ClassStats] = {}
    for label in sorted({truth_class[s.example_id] for s in scores}):
        group = [s for s in scores if truth_class[s.example_id] == label]
        per_class[label] = ClassStats(
            accuracy=sum(s.exact_match for s in group) / len(group),
            precision=sum(s.unigram_precision for s in group) / len(group),
            n=len(group),
        )

    confusion: dict[tuple[str, str], int] = {}
    for score in scores:
        key = (truth_class[score.example_id], score.predicted_class)
        confusion[key] = confusion.get(key, 0) + 1

    backend_id = getattr(deps.backend, "backend_id", "unknown")
    snapshot = {
        "backend_id": backend_id,
        "rag_enabled": config.rag_enabled,
        "retry_on_invalid": config.retry_on_invalid,
        "k_classifier": config.retriever.k_classifier,
        "k_generator": config.retriever.k_generator,
        "precision_mode": precision_mode,
        "dataset": dataset.name,
    }
    return EvalReport(
        accuracy=accuracy,
        mean_unigram_precision=mean_precision,
        n=n,
        per_class=per_class,
        confusion=confusion,
        config_snapshot=snapshot,
    )


def _pct(value: float) -> str:
    return f"{value * 100:.1f}%"


def emit_report(report: EvalReport, format: str = "table") -> str:
    """Render a report: human table or machine-readable JSON."""
    if format == "machine":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "accuracy": report.accuracy,
            "mean_unigram_precision": report.mean_unigram_precision,
            "n": report.n,
            "per_class": {
                name: {"accuracy": s.accuracy, "precision": s.precision, "n": s.n}
                for name, s in report.per_class.items()
            },
            "confusion": [
                {"true": t, "predicted": p, "count": c}
                for (t, p), c in sorted(report.confusion.items())
            ],
            "config_snapshot": report.config_snapshot,
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False)

    if format != "table":
        raise ValueError(f"unknown report format {format!r}")

    model = report.config_snapshot.get("backend_id", "unknown")
    rag = "yes" if report.config_snapshot.get("rag_enabled", True) else "no"
    header = ("LLM Model", "RAG", "Accuracy", "uni-gram precision")
    row = (model, rag, _pct(report.accuracy), _pct(report.mean_unigram_precision))
    widths = [max(len(h), len(r)) for h, r in zip(header, row)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join(r.ljust(w) for r, w in zip(row, widths)).rstrip(),
        f"n = {report.n}",
    ]
    if report.per_class:
        lines.append("")
        lines.append("per-class:")
        name_w = max(len(name) for name in report.per_class)
        for name, stats in report.per_class.items():
            lines.append(
                f"  {name.ljust(name_w)}  n={stats.n:<4d}"
                f" accuracy={_pct(stats.accuracy):<7s}"
                f" uni-gram precision={_pct(stats.precision)}"
            )
    misses = {k: v for k, v in report.confusion.items() if k[0] != k[1]}
    if misses:
        lines.append("")
        lines.append("classifier confusion (true -> predicted):")
        for (true_class, predicted), count in sorted(misses.items()):
            lines.append(f"  {true_class} -> {predicted}: {count}")
    return "\n".join(lines)


def parse_report(text: str) -> EvalReport:
    """Parse the machine-readable format back into an EvalReport."""
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise NetwordError(
            f"unsupported report schema_version {doc.get('schema_version')!r}"
        )
    return EvalReport(
        accuracy=doc["accuracy"],
        mean_unigram_precision=doc["mean_unigram_precision"],
        n=doc["n"],
        per_class={
            name: ClassStats(
                accuracy=s["accuracy"], precision=s["precision"], n=s["n"]
            )
            for name, s in doc["per_class"].items()
        },
        confusion={
            (entry["true"], entry["predicted"]): entry["count"]
            for entry in doc["confusion"]
        },
        config_snapshot=doc["config_snapshot"],
    )
