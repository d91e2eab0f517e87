"""Shared test doubles and independent oracles.

The oracles here deliberately re-derive results through a different
route than the implementation (pure-python cosine scan, datetime
calendar, set arithmetic on token lists) so the tests stay meaningful.
"""

from __future__ import annotations

import math
import random
from datetime import datetime

from netword.backends import GenerationResponse, Health
from netword.corpus import ClassCatalog, Dataset
from netword.grammar import ARG_DATE, ARG_IMSI, ARG_LITERAL, ARG_NOW, CommandAst, Flag, FlagArg


def instruction_of(user_text: str) -> str:
    """The instruction line of a rendered prompt (second line)."""
    return user_text.split("\n")[1]


class OracleBackend:
    """Answers every prompt with the fixture's ground truth.

    Step 1 prompts are recognized by their classifier system text; the
    mapping provides (class, command) per instruction.
    """

    backend_id = "oracle"
    model_name = "oracle"

    def __init__(self, mapping: dict[str, tuple[str, str]], mangle=None):
        self.mapping = mapping
        self.mangle = mangle  # optional fn(command) -> str applied to step 2
        self.calls = []

    @classmethod
    def for_dataset(cls, dataset: Dataset, mangle=None) -> "OracleBackend":
        return cls(
            {e.input_text: (e.class_label, e.command) for e in dataset.examples},
            mangle=mangle,
        )

    @property
    def call_count(self) -> int:
        return len(self.calls)

    def generate(self, request) -> GenerationResponse:
        self.calls.append(request)
        class_name, command = self.mapping[instruction_of(request.user_text)]
        if request.system_text.startswith("You are a classifier"):
            return GenerationResponse(
                text=f"Answer:\n{class_name}", latency_ms=0, backend_id=self.backend_id
            )
        if self.mangle is not None:
            command = self.mangle(command)
        return GenerationResponse(
            text=f"Answer:\n{command}", latency_ms=0, backend_id=self.backend_id
        )

    def health(self) -> Health:
        return Health(healthy=True)


class SamplesOnlyBackend(OracleBackend):
    """Correct only when the prompt carries a Samples section."""

    backend_id = "samples-only"

    def generate(self, request) -> GenerationResponse:
        if "Samples:" not in request.user_text:
            self.calls.append(request)
            return GenerationResponse(
                text="I cannot tell.", latency_ms=0, backend_id=self.backend_id
            )
        return super().generate(request)


def brute_force_top_k(index, query_vector, k, class_filter=None):
    """Exhaustive scan oracle: plain-python cosine + stable sort."""

    def cos(a, b):
        dot = sum(x * y for x, y in zip(a.values, b.values))
        na = math.sqrt(sum(x * x for x in a.values))
        nb = math.sqrt(sum(y * y for y in b.values))
        if na == 0.0 or nb == 0.0:
            return 0.0
        return max(-1.0, min(1.0, dot / (na * nb)))

    scored = [
        (e.example_id, cos(query_vector, e.vector))
        for e in index.entries
        if class_filter is None or e.class_label == class_filter
    ]
    scored.sort(key=lambda pair: -pair[1])  # stable, ties keep insertion order
    return scored[:k]


def oracle_valid_date(token: str) -> bool:
    """Independent calendar check via datetime."""
    if len(token) != 8 or not token.isdigit():
        return False
    try:
        datetime.strptime(token, "%Y%m%d")
    except ValueError:
        return False
    return True


def oracle_unigram_precision(output_tokens: list[str], truth_tokens: list[str]) -> float:
    """Independent set-intersection metric oracle over token lists."""
    out = set(output_tokens)
    if not out:
        return 0.0
    hits = 0
    truth = set(truth_tokens)
    for token in out:
        if token in truth:
            hits += 1
    return hits / len(out)


def random_date(rng: random.Random) -> str:
    year = rng.randint(1, 9999)
    month = rng.randint(1, 12)
    days = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31][month - 1]
    if month == 2 and year % 4 == 0 and (year % 100 != 0 or year % 400 == 0):
        days = 29
    return f"{year:04d}{month:02d}{rng.randint(1, days):02d}"


def random_literal(rng: random.Random) -> str:
    # Starts with a letter so it can never be read as a date or IMSI.
    first = rng.choice("abcdefghijklmnopqrstuvwxyz")
    rest = "".join(
        rng.choice("abcdefghijklmnopqrstuvwxyz0123456789") for _ in range(rng.randint(0, 6))
    )
    return first + rest


def random_arg(rng: random.Random, kind: str) -> str:
    if kind == ARG_DATE:
        return random_date(rng)
    if kind == ARG_NOW:
        return "now"
    if kind == ARG_IMSI:
        return "".join(rng.choice("0123456789") for _ in range(rng.choice((14, 15))))
    if kind == ARG_LITERAL:
        return random_literal(rng)
    raise AssertionError(kind)


def random_ast(rng: random.Random, catalog: ClassCatalog):
    """A random valid AST under the catalog, paired with its class."""
    command_class = rng.choice(catalog.classes)
    base = rng.choice(command_class.base_commands).split()
    verb, obj = base[0], base[1] if len(base) > 1 else None
    flag_specs = list(command_class.flags)
    rng.shuffle(flag_specs)
    flags = []
    for spec in flag_specs[: rng.randint(0, len(flag_specs))]:
        pattern = rng.choice(spec.arg_patterns)
        flags.append(
            Flag(
                name=spec.name,
                args=tuple(FlagArg(kind=k, raw=random_arg(rng, k)) for k in pattern),
            )
        )
    return CommandAst(verb=verb, object=obj, flags=tuple(flags)), command_class
