"""Operator command line: serve the API, ask one-shot, evaluate, manage corpus.

Exit codes are a stable scripting contract: 0 success, 1 pipeline or
backend failure, 2 usage error. ``ask`` prints exactly the canonical
command (plus newline) to stdout so shell substitution works; traces and
errors go to stderr.
"""

from __future__ import annotations

import argparse
import socket
import sys
from pathlib import Path

from . import __version__
from . import config as config_mod
from . import corpus as corpus_mod
from . import evaluation, pipeline as pipeline_mod
from .errors import NetwordError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netword",
        description="Translate natural-language requests into validated 5G management commands.",
    )
    parser.add_argument("--version", action="version", version=f"netword {__version__}")
    parser.add_argument(
        "--config", metavar="PATH", default=None,
        help="config file (JSON); defaults to $NETWORD_CONFIG",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--bind", metavar="HOST:PORT", default=None)

    ask = sub.add_parser("ask", help="translate one instruction and print the command")
    ask.add_argument("instruction")
    ask.add_argument("--rag", action=argparse.BooleanOptionalAction, default=None,
                     help="retrieve few-shot samples (default: on)")
    ask.add_argument("--show-trace", action="store_true",
                     help="print retrieval and model traces to stderr")

    ev = sub.add_parser("eval", help="score a dataset and print the report")
    ev.add_argument("dataset", metavar="PATH")
    ev.add_argument("--rag", action=argparse.BooleanOptionalAction, default=None)
    ev.add_argument("--format", choices=("table", "machine"), default="table")

    corpus = sub.add_parser("corpus", help="manage the example corpus")
    corpus_sub = corpus.add_subparsers(dest="corpus_command", required=True)
    validate = corpus_sub.add_parser("validate", help="validate a corpus file")
    validate.add_argument("path", metavar="PATH")
    add = corpus_sub.add_parser("add", help="append a validated example")
    add.add_argument("--corpus", metavar="PATH", required=True)
    add.add_argument("--input", required=True)
    add.add_argument("--command", dest="command_text", required=True)
    add.add_argument("--class", dest="class_label", required=True)
    add.add_argument("--id", default=None)

    return parser


def _load_deps(args: argparse.Namespace, overrides: dict | None = None) -> config_mod.Deps:
    settings = config_mod.load_settings(config_path=args.config, overrides=overrides)
    return config_mod.build_deps(settings)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import Store, create_app

    overrides = {"bind": args.bind} if args.bind else {}
    try:
        deps = _load_deps(args, overrides)
    except NetwordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    host, port = deps.settings.bind_host, deps.settings.bind_port

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        print(f"error: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        sock.close()
        return EXIT_FAILURE
    sock.listen(128)

    app = create_app(deps, Store(deps.settings.db_path or None))
    print(f"netword service listening on http://{host}:{port}", flush=True)
    server = uvicorn.Server(
        uvicorn.Config(app, log_level="warning", access_log=False)
    )
    server.run(sockets=[sock])
    return EXIT_OK


def _cmd_ask(args: argparse.Namespace) -> int:
    if not args.instruction.strip():
        print("error: instruction must be non-empty", file=sys.stderr)
        return EXIT_USAGE
    try:
        deps = _load_deps(args)
        config = deps.pipeline_config(rag_enabled=args.rag)
        result = pipeline_mod.run(args.instruction, deps.pipeline_deps(), config)
    except NetwordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.show_trace:
        trace = result.trace
        print(f"class: {result.class_name}"
              f" (fallback: {trace.classification.used_fallback})", file=sys.stderr)
        print(f"classifier retrieved: {list(trace.classification.retrieved)}",
              file=sys.stderr)
        print(f"generator retrieved: {list(result.retrieved)}", file=sys.stderr)
        for i, raw in enumerate(trace.raw_responses, 1):
            print(f"raw response {i}: {raw!r}", file=sys.stderr)
    print(result.command)
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    try:
        deps = _load_deps(args)
        dataset = corpus_mod.load_dataset(
            args.dataset, deps.catalog, split=corpus_mod.SPLIT_EVAL
        )
        config = deps.pipeline_config(rag_enabled=args.rag)
        report = evaluation.evaluate(dataset, deps.pipeline_deps(), config)
    except NetwordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(evaluation.emit_report(report, format=args.format))
    return EXIT_OK


def _cmd_corpus(args: argparse.Namespace) -> int:
    try:
        settings = config_mod.load_settings(config_path=args.config)
        catalog = (
            corpus_mod.load_catalog(settings.catalog_path)
            if settings.catalog_path
            else corpus_mod.default_catalog()
        )
    except NetwordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    if args.corpus_command == "validate":
        try:
            dataset = corpus_mod.load_dataset(args.path, catalog)
        except NetwordError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAILURE
        print(f"ok: {len(dataset)} example(s)")
        return EXIT_OK

    # corpus add
    path = Path(args.corpus)
    try:
        dataset = (
            corpus_mod.load_dataset(path, catalog)
            if path.exists()
            else corpus_mod.Dataset(name=path.stem)
        )
        example = corpus_mod.Example(
            id=args.id or corpus_mod.next_id(dataset),
            input_text=args.input,
            command=args.command_text,
            class_label=args.class_label,
        )
        dataset = corpus_mod.add_example(dataset, example, catalog)
        corpus_mod.save_dataset(dataset, path)
    except NetwordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"added {example.id} ({len(dataset)} example(s) total)")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "ask": _cmd_ask,
        "eval": _cmd_eval,
        "corpus": _cmd_corpus,
    }
    return handlers[args.command](args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
