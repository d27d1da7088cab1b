"""Command-line entry point: compile, history add, validate, serve."""

from __future__ import annotations

import argparse
import socket
import sys
from pathlib import Path

from .errors import ReadforgeError
from .project import (
    add_history_entry,
    compile_project,
    load_project_config,
    validate_project,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _report(warnings: list[str], errors: list[str]) -> None:
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)
    for line in errors:
        print(f"error: {line}", file=sys.stderr)


def _cmd_compile(args: argparse.Namespace) -> int:
    config = load_project_config(Path(args.config))
    result = compile_project(config)
    _report(result.warnings, result.errors)
    print(
        f"compiled {len(result.plan.text_pages)} text page(s) and "
        f"{len(result.plan.concordance_pages)} concordance page(s) -> {config.output_dir}"
    )
    if result.warnings:
        print(f"{len(result.warnings)} warning(s)", file=sys.stderr)
    return EXIT_ERROR if result.errors else EXIT_OK


def _cmd_history_add(args: argparse.Namespace) -> int:
    config = load_project_config(Path(args.config))
    length = add_history_entry(config, args.text_id)
    print(length)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    config = load_project_config(Path(args.config))
    warnings, errors = validate_project(config)
    _report(warnings, errors)
    print(f"{len(errors)} error(s), {len(warnings)} warning(s)")
    return EXIT_ERROR if errors else EXIT_OK


def _port_available(port: int, host: str) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        try:
            probe.bind((host, port))
        except OSError:
            return False
    return True


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = load_project_config(Path(args.config))
    site_dir = config.output_dir
    if not site_dir.is_dir():
        print(
            f"error: output directory {site_dir} does not exist; run compile first",
            file=sys.stderr,
        )
        return EXIT_ERROR
    log_path = Path(args.log) if args.log else Path(args.config).parent / "events.ndjson"
    if not _port_available(args.port, args.host):
        print(f"error: port {args.port} is already in use", file=sys.stderr)
        return EXIT_ERROR
    app = create_app(site_dir, logging_enabled=config.logging_enabled, log_path=log_path)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="readforge",
        description="Compile annotated reading texts into a personalized static site.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compile_parser = sub.add_parser("compile", help="compile the project site")
    compile_parser.add_argument("config", help="path to project.json")
    compile_parser.set_defaults(func=_cmd_compile)

    history_parser = sub.add_parser("history", help="manage the reading history")
    history_sub = history_parser.add_subparsers(dest="history_command", required=True)
    add_parser = history_sub.add_parser("add", help="append a read text to the history")
    add_parser.add_argument("config", help="path to project.json")
    add_parser.add_argument("text_id", help="declared text id to append")
    add_parser.set_defaults(func=_cmd_history_add)

    validate_parser = sub.add_parser("validate", help="check texts, manifests, and links")
    validate_parser.add_argument("config", help="path to project.json")
    validate_parser.set_defaults(func=_cmd_validate)

    serve_parser = sub.add_parser("serve", help="serve the compiled site locally")
    serve_parser.add_argument("config", help="path to project.json")
    serve_parser.add_argument("--port", type=int, default=8000)
    serve_parser.add_argument("--host", default="127.0.0.1")
    serve_parser.add_argument("--log", default=None, help="event log path (NDJSON)")
    serve_parser.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ReadforgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entrypoint() -> None:
    sys.exit(main())
