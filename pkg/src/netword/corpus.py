"""Example corpus and command-class catalog: load, validate, persist.

The corpus file is UTF-8 JSON Lines, one record per line with exactly the
fields ``id``, ``input``, ``command``, ``class``. The catalog is a JSON
document listing every command class with its description, generator
system prompt, base-command syntax, and flag specs. Validation is strict
at load time: a corrupt corpus silently degrades retrieval quality, so
every command is parsed under its class grammar before anything is used.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from . import grammar
from .errors import CatalogError, CorpusError, ParseError

SPLIT_TRAIN = "train-corpus"
SPLIT_EVAL = "eval"

# Classes the shipped default catalog must contain.
DEFAULT_CATALOG_SIZE = 11
_RECORD_FIELDS = ("id", "input", "command", "class")


@dataclass(frozen=True)
class Example:
    """One corpus record: a natural-language request and its command."""

    id: str
    input_text: str
    command: str
    class_label: str


@dataclass(frozen=True)
class CommandClass:
    name: str
    description: str
    system_prompt: str
    base_commands: tuple[str, ...]
    flags: tuple[grammar.FlagSpec, ...] = ()


@dataclass(frozen=True)
class ClassCatalog:
    classes: tuple[CommandClass, ...]
    version: int = 1

    def __post_init__(self):
        names = [c.name for c in self.classes]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise CatalogError(f"duplicate class name(s): {', '.join(sorted(dupes))}")
        for cls in self.classes:
            if cls.name != cls.name.lower() or any(ch.isspace() for ch in cls.name):
                raise CatalogError(
                    f"class name must be lowercase with no whitespace: {cls.name!r}"
                )
            if not cls.system_prompt.strip():
                raise CatalogError(f"class {cls.name!r}: empty system_prompt")
            if not cls.base_commands:
                raise CatalogError(f"class {cls.name!r}: no base commands")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.classes)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.classes)

    def get(self, name: str) -> CommandClass:
        for cls in self.classes:
            if cls.name == name:
                return cls
        raise KeyError(name)


@dataclass(frozen=True)
class Dataset:
    examples: tuple[Example, ...] = ()
    name: str = "dataset"
    split: str = SPLIT_TRAIN

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.examples)

    def by_id(self, example_id: str) -> Example:
        for example in self.examples:
            if example.id == example_id:
                return example
        raise KeyError(example_id)

    def __len__(self) -> int:
        return len(self.examples)


def validate_example(example: Example, catalog: ClassCatalog) -> None:
    """Check one record's invariants, including grammar validity of its command."""
    if not example.id.strip():
        raise CorpusError("empty id")
    if not example.input_text.strip():
        raise CorpusError(f"record {example.id!r}: empty input")
    if not example.command.strip():
        raise CorpusError(f"record {example.id!r}: empty command")
    if example.class_label not in catalog:
        raise CorpusError(
            f"record {example.id!r}: unknown class {example.class_label!r}"
            f" (catalog has: {', '.join(catalog.names)})"
        )
    try:
        grammar.parse(example.command, catalog.get(example.class_label))
    except ParseError as exc:
        raise CorpusError(
            f"record {example.id!r}: command fails {example.class_label!r} grammar: {exc}"
        ) from exc


def _parse_record(line: str, lineno: int) -> Example:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"malformed record: {exc.msg}", line=lineno) from exc
    if not isinstance(raw, dict):
        raise CorpusError("malformed record: expected an object", line=lineno)
    missing = [f for f in _RECORD_FIELDS if f not in raw]
    if missing:
        raise CorpusError(f"missing field(s): {', '.join(missing)}", line=lineno)
    unknown = [f for f in raw if f not in _RECORD_FIELDS]
    if unknown:
        raise CorpusError(f"unknown field(s): {', '.join(unknown)}", line=lineno)
    for name in _RECORD_FIELDS:
        if not isinstance(raw[name], str):
            raise CorpusError(f"field {name!r} must be a string", line=lineno)
    return Example(
        id=raw["id"],
        input_text=raw["input"],
        command=raw["command"],
        class_label=raw["class"],
    )


def load_dataset(
    path: str | Path,
    catalog: ClassCatalog,
    split: str = SPLIT_TRAIN,
    name: str | None = None,
) -> Dataset:
    """Load and strictly validate a JSON Lines corpus file."""
    path = Path(path)
    examples: list[Example] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            example = _parse_record(line, lineno)
            try:
                validate_example(example, catalog)
            except CorpusError as exc:
                raise CorpusError(str(exc), line=lineno) from exc
            if example.id in seen:
                raise CorpusError(f"duplicate id {example.id!r}", line=lineno)
            seen.add(example.id)
            examples.append(example)
    return Dataset(examples=tuple(examples), name=name or path.stem, split=split)


def canonical_record(example: Example) -> str:
    """Canonical one-line serialization of a record (fixed field order)."""
    return json.dumps(
        {
            "id": example.id,
            "input": example.input_text,
            "command": example.command,
            "class": example.class_label,
        },
        ensure_ascii=False,
    )


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write the canonical form; save(load(f)) is byte-identical for canonical f."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for example in dataset.examples:
            fh.write(canonical_record(example) + "\n")


def fingerprint(dataset: Dataset) -> str:
    """Content hash over canonical records, independent of file formatting."""
    digest = hashlib.sha256()
    for example in dataset.examples:
        digest.update(canonical_record(example).encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def add_example(dataset: Dataset, example: Example, catalog: ClassCatalog) -> Dataset:
    """Return a new dataset with ``example`` appended; original order kept."""
    validate_example(example, catalog)
    if example.id in set(dataset.ids):
        raise CorpusError(f"duplicate id {example.id!r}")
    return replace(dataset, examples=dataset.examples + (example,))


def next_id(dataset: Dataset, prefix: str = "ex") -> str:
    """Sequential id helper for ingest paths where the caller supplies none."""
    used = set(dataset.ids)
    n = len(dataset.examples) + 1
    while f"{prefix}{n:04d}" in used:
        n += 1
    return f"{prefix}{n:04d}"


def _parse_flag_spec(raw: dict, class_name: str) -> grammar.FlagSpec:
    try:
        return grammar.FlagSpec(
            name=raw["name"],
            arg_patterns=tuple(tuple(p) for p in raw["arg_patterns"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError(f"class {class_name!r}: bad flag spec: {exc}") from exc


def load_catalog(path: str | Path) -> ClassCatalog:
    """Load a class catalog document and enforce its invariants."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path.name}: malformed JSON: {exc.msg}") from exc
    if not isinstance(raw, dict) or "classes" not in raw:
        raise CatalogError(f"{path.name}: expected an object with a 'classes' list")
    classes = []
    for entry in raw["classes"]:
        missing = [
            f
            for f in ("name", "description", "system_prompt", "base_commands", "flags")
            if f not in entry
        ]
        if missing:
            raise CatalogError(
                f"class entry missing field(s): {', '.join(missing)}"
            )
        classes.append(
            CommandClass(
                name=entry["name"],
                description=entry["description"],
                system_prompt=entry["system_prompt"],
                base_commands=tuple(entry["base_commands"]),
                flags=tuple(
                    _parse_flag_spec(f, entry["name"]) for f in entry["flags"]
                ),
            )
        )
    version = int(raw.get("version", 1))
    return ClassCatalog(classes=tuple(classes), version=version)


def save_catalog(catalog: ClassCatalog, path: str | Path) -> None:
    doc = {
        "version": catalog.version,
        "classes": [
            {
                "name": c.name,
                "description": c.description,
                "system_prompt": c.system_prompt,
                "base_commands": list(c.base_commands),
                "flags": [
                    {"name": f.name, "arg_patterns": [list(p) for p in f.arg_patterns]}
                    for f in c.flags
                ],
            }
            for c in catalog.classes
        ],
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, indent=2) + "\n", "utf-8")


def _data_path(name: str):
    return resources.files("netword").joinpath("data", name)


def default_catalog() -> ClassCatalog:
    """The shipped 11-class catalog (user, list, test, create, remove, ...)."""
    with resources.as_file(_data_path("catalog.json")) as path:
        catalog = load_catalog(path)
    if len(catalog.classes) != DEFAULT_CATALOG_SIZE:
        raise CatalogError(
            f"shipped catalog must have {DEFAULT_CATALOG_SIZE} classes,"
            f" found {len(catalog.classes)}"
        )
    return catalog


def default_corpus(catalog: ClassCatalog | None = None) -> Dataset:
    """The small corpus shipped for demos and offline runs."""
    catalog = catalog or default_catalog()
    with resources.as_file(_data_path("corpus.jsonl")) as path:
        return load_dataset(path, catalog, name="default-corpus")
