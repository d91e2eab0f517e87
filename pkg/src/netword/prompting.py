"""Prompt assembly for both pipeline steps.

The classifier prompt enumerates every catalog class, then presents the
instruction and (with retrieval on) the retrieved samples as numbered
Input/Output pairs whose outputs are class names. The generator prompt
uses the chosen class's system prompt and the same user-text shape with
commands as outputs. A trailing "Answer:" cue line anchors extraction.
Rendering is byte-deterministic; golden files under the test suite pin
the canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from string import Template

from .corpus import ClassCatalog, CommandClass

# Visual separline between the instruction/samples block and the answer cue.
SEPARATOR = "-" * 36

# Final line of every user text; extraction and scripted tests anchor on it.
ANSWER_CUE = "Answer:"


@dataclass(frozen=True)
class SampleBlock:
    """Retrieved (input, output) pairs in rank order, most similar first."""

    entries: tuple[tuple[str, str], ...] = ()

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_SAMPLES = SampleBlock()


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    rag_enabled: bool


@lru_cache(maxsize=None)
def _template(name: str) -> Template:
    text = resources.files("netword").joinpath("templates", name).read_text("utf-8")
    return Template(text.removesuffix("\n"))


def _samples_section(samples: SampleBlock, rag_enabled: bool) -> str:
    if not rag_enabled:
        return ""
    lines = ["", "Samples:"]
    for rank, (input_text, output_text) in enumerate(samples.entries, 1):
        lines.append(f"{rank}. Input: {input_text}")
        lines.append(f"Output: {output_text}")
    return "\n".join(lines) + "\n"


def _user_text(instruction: str, samples: SampleBlock, rag_enabled: bool) -> str:
    return _template("user.txt").substitute(
        instruction=instruction.strip(),
        samples_section=_samples_section(samples, rag_enabled),
        separator=SEPARATOR,
    )


def build_classifier_prompt(
    catalog: ClassCatalog,
    instruction: str,
    samples: SampleBlock = EMPTY_SAMPLES,
    rag_enabled: bool = True,
) -> PromptBundle:
    """Step-1 prompt: classify the instruction into one catalog class."""
    class_list = "\n".join(
        f"{i}. {cls.name}: {cls.description}"
        for i, cls in enumerate(catalog.classes, 1)
    )
    system_text = _template("classifier_system.txt").substitute(class_list=class_list)
    return PromptBundle(
        system_text=system_text,
        user_text=_user_text(instruction, samples, rag_enabled),
        rag_enabled=rag_enabled,
    )


def build_generator_prompt(
    command_class: CommandClass,
    instruction: str,
    samples: SampleBlock = EMPTY_SAMPLES,
    rag_enabled: bool = True,
) -> PromptBundle:
    """Step-2 prompt: generate the command under the chosen class."""
    return PromptBundle(
        system_text=command_class.system_prompt,
        user_text=_user_text(instruction, samples, rag_enabled),
        rag_enabled=rag_enabled,
    )
