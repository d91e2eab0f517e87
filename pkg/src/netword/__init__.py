"""netword: natural language to validated 5G management commands.

A two-step retrieval-augmented pipeline against a locally running LLM:
classify the request into a command class, then generate the command
with class-specific few-shot samples, extract it from the completion,
and validate it under a data-driven grammar. Ships an HTTP service, a
CLI, and an offline evaluation harness (exact-match accuracy and
uni-gram precision).
"""

__version__ = "0.1.0"
