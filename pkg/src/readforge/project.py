"""Project configuration and the end-to-end compile pipeline.

A project is one JSON file ("project.json") declaring texts, the history
file, manifests, thresholds, and the output directory. All relative paths
are resolved against the config file's directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .concordance import build_all_concordances
from .corpus import RESOURCE_ID_RE, AnnotatedText, LemmaIndex, ReadingHistory, validate_text
from .errors import (
    BadPackage,
    ConfigError,
    DuplicateText,
    EmptyHistory,
    EmptyText,
    FetchFailure,
    HistoryMiss,
    MalformedManifest,
    ReadforgeError,
    UnknownText,
)
from .history import (
    DEFAULT_THRESHOLDS,
    BandThresholds,
    build_index,
    read_history_file,
    write_history_file,
)
from .manifest import (
    Fetcher,
    ResourceManifest,
    http_fetcher,
    import_package,
    load_manifest,
    offline_fetcher,
    resolve_resource,
)
from .parsing import Lexicon, ParseDiagnostic, Severity, load_lexicon, parse_text
from .render import SitePlan, emit_site, plan_site

import json

NO_NET_ENV_VAR = "READFORGE_NO_NET"


@dataclass(frozen=True, slots=True)
class TextDecl:
    """One declared text: either a local source file or a remote package."""

    text_id: str
    title: str
    language: str
    source_path: Path | None = None
    package_url: str | None = None


@dataclass(frozen=True, slots=True)
class ProjectConfig:
    project_id: str
    texts: tuple[TextDecl, ...]
    history_path: Path
    output_dir: Path
    manifest_paths: tuple[Path, ...] = ()
    lexicon_path: Path | None = None
    thresholds: BandThresholds = DEFAULT_THRESHOLDS
    # Consent gate for the serve command's /log endpoint and the pages'
    # consent metadata; an absent key must behave as False.
    logging_enabled: bool = False

    def declared_ids(self) -> set[str]:
        return {decl.text_id for decl in self.texts}


def load_project_config(path: Path) -> ProjectConfig:
    """Read and validate project.json; raises ConfigError on any defect."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read project config {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"project config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"project config {path} must be a JSON object")

    base = path.parent

    def resolve(relative: str) -> Path:
        p = Path(relative)
        return p if p.is_absolute() else base / p

    project_id = data.get("project_id")
    if not isinstance(project_id, str) or not project_id:
        raise ConfigError(f"{path}: missing or empty 'project_id'")

    raw_texts = data.get("texts")
    if not isinstance(raw_texts, list) or not raw_texts:
        raise ConfigError(f"{path}: 'texts' must be a non-empty list")
    decls: list[TextDecl] = []
    seen_ids: set[str] = set()
    for i, entry in enumerate(raw_texts):
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: texts[{i}] must be an object")
        text_id = entry.get("text_id")
        if not isinstance(text_id, str) or not RESOURCE_ID_RE.fullmatch(text_id):
            raise ConfigError(
                f"{path}: texts[{i}] text_id {text_id!r} must match [a-z0-9_]+"
            )
        if text_id in seen_ids:
            raise ConfigError(f"{path}: duplicate text_id {text_id!r}")
        seen_ids.add(text_id)
        source_path = entry.get("source_path")
        package_url = entry.get("package_url")
        if bool(source_path) == bool(package_url):
            raise ConfigError(
                f"{path}: texts[{i}] needs exactly one of source_path or package_url"
            )
        decls.append(
            TextDecl(
                text_id=text_id,
                title=entry.get("title", text_id),
                language=entry.get("language", "und"),
                source_path=resolve(source_path) if source_path else None,
                package_url=package_url,
            )
        )

    history_path = data.get("history_path")
    if not isinstance(history_path, str) or not history_path:
        raise ConfigError(f"{path}: missing 'history_path'")
    output_dir = data.get("output_dir")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError(f"{path}: missing 'output_dir'")

    manifest_paths = data.get("manifest_paths", [])
    if not isinstance(manifest_paths, list):
        raise ConfigError(f"{path}: 'manifest_paths' must be a list")

    thresholds_data = data.get("thresholds", {})
    if not isinstance(thresholds_data, dict):
        raise ConfigError(f"{path}: 'thresholds' must be an object")
    try:
        thresholds = BandThresholds(**thresholds_data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad thresholds: {exc}") from exc

    logging_enabled = data.get("logging_enabled", False)
    if not isinstance(logging_enabled, bool):
        raise ConfigError(f"{path}: 'logging_enabled' must be a boolean")

    lexicon_path = data.get("lexicon_path")
    if lexicon_path is not None and not isinstance(lexicon_path, str):
        raise ConfigError(f"{path}: 'lexicon_path' must be a string")

    return ProjectConfig(
        project_id=project_id,
        texts=tuple(decls),
        history_path=resolve(history_path),
        output_dir=resolve(output_dir),
        manifest_paths=tuple(resolve(p) for p in manifest_paths),
        lexicon_path=resolve(lexicon_path) if lexicon_path else None,
        thresholds=thresholds,
        logging_enabled=logging_enabled,
    )


def default_fetcher() -> Fetcher:
    if os.environ.get(NO_NET_ENV_VAR) == "1":
        return offline_fetcher
    return http_fetcher


@dataclass(slots=True)
class CompileResult:
    plan: SitePlan
    index: LemmaIndex
    history: ReadingHistory
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def _read_file(path: Path, what: str) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {what} {path}: {exc}") from exc


def _format_diagnostics(
    origin: Path, diagnostics: list[ParseDiagnostic], warnings: list[str], errors: list[str]
) -> None:
    for diag in diagnostics:
        line = f"{origin}:{diag.line}:{diag.column}: {diag.message}"
        (errors if diag.severity is Severity.ERROR else warnings).append(line)


def _load_lexicon(
    config: ProjectConfig, warnings: list[str], errors: list[str]
) -> Lexicon | None:
    if config.lexicon_path is None:
        return None
    lexicon, diagnostics = load_lexicon(_read_file(config.lexicon_path, "lexicon"))
    _format_diagnostics(config.lexicon_path, diagnostics, warnings, errors)
    return lexicon


def _load_history_text(
    decl: TextDecl,
    lexicon: Lexicon | None,
    fetcher: Fetcher,
    fragments: list[ResourceManifest],
    warnings: list[str],
    errors: list[str],
) -> AnnotatedText:
    if decl.source_path is not None:
        source = _read_file(decl.source_path, "text source")
        text, diagnostics = parse_text(
            source, decl.text_id, decl.title, decl.language, lexicon
        )
        _format_diagnostics(decl.source_path, diagnostics, warnings, errors)
        return text
    package, package_diagnostics = import_package(decl.package_url, fetcher)
    if package.text.text_id != decl.text_id:
        raise BadPackage(
            f"package at {decl.package_url} declares text_id "
            f"{package.text.text_id!r} but the project expects {decl.text_id!r}"
        )
    # Remote package content is third-party; its diagnostics never fail a
    # local build.
    warnings.extend(package_diagnostics)
    fragments.append(package.manifest_fragment)
    return package.text


def _load_manifests(
    config: ProjectConfig, warnings: list[str]
) -> list[ResourceManifest]:
    manifests = []
    for manifest_path in config.manifest_paths:
        try:
            source = manifest_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise MalformedManifest(f"cannot read manifest {manifest_path}: {exc}") from exc
        manifest, manifest_warnings = load_manifest(source, origin=str(manifest_path))
        warnings.extend(manifest_warnings)
        manifests.append(manifest)
    return manifests


def compile_project(config: ProjectConfig, fetcher: Fetcher | None = None) -> CompileResult:
    """Run the full pipeline: parse, index, concordance, emit.

    Only texts actually present in the history are loaded, so remote
    packages outside the history cost no fetches. Raises a ReadforgeError
    subtype on any condition that prevents emitting the site; recoverable
    findings land in warnings/errors on the result.
    """
    fetcher = fetcher or default_fetcher()
    warnings: list[str] = []
    errors: list[str] = []

    history = read_history_file(config.history_path)
    if not history.entries:
        raise EmptyHistory(
            f"history at {config.history_path} is empty; nothing to compile"
        )
    declared = {decl.text_id: decl for decl in config.texts}
    for entry in history.entries:
        if entry not in declared:
            raise HistoryMiss(f"history entry {entry!r} is not declared in the project")

    lexicon = _load_lexicon(config, warnings, errors)

    texts: dict[str, AnnotatedText] = {}
    fragments: list[ResourceManifest] = []
    for entry in history.entries:
        texts[entry] = _load_history_text(
            declared[entry], lexicon, fetcher, fragments, warnings, errors
        )

    # Project manifests take precedence over imported package fragments.
    manifests = _load_manifests(config, warnings) + fragments

    index = build_index(history, texts)
    concordances = build_all_concordances(index, history, texts)
    plan, emit_warnings = emit_site(
        history,
        texts,
        index,
        concordances,
        manifests,
        config.thresholds,
        config.output_dir,
        consent=config.logging_enabled,
    )
    warnings.extend(emit_warnings)
    return CompileResult(
        plan=plan, index=index, history=history, warnings=warnings, errors=errors
    )


def validate_project(config: ProjectConfig, fetcher: Fetcher | None = None) -> tuple[list[str], list[str]]:
    """Validate every declared text, manifest, and the link plan, without emitting.

    Returns (warnings, errors); callers decide the exit code. Unlike
    compile, this loads all declared texts, not just the history.
    """
    fetcher = fetcher or default_fetcher()
    warnings: list[str] = []
    errors: list[str] = []

    try:
        lexicon = _load_lexicon(config, warnings, errors)
    except ConfigError as exc:
        errors.append(str(exc))
        lexicon = None

    texts: dict[str, AnnotatedText] = {}
    fragments: list[ResourceManifest] = []
    for decl in config.texts:
        try:
            text = _load_history_text(decl, lexicon, fetcher, fragments, warnings, errors)
        except (ConfigError, EmptyText, FetchFailure, BadPackage) as exc:
            errors.append(str(exc))
            continue
        for violation in validate_text(text):
            errors.append(violation)
        texts[decl.text_id] = text

    manifests: list[ResourceManifest] = []
    try:
        manifests = _load_manifests(config, warnings)
    except ReadforgeError as exc:
        errors.append(str(exc))
    manifests += fragments

    try:
        history = read_history_file(config.history_path)
    except DuplicateText as exc:
        errors.append(str(exc))
        history = ReadingHistory()
    if not history.entries:
        warnings.append(f"history at {config.history_path} is empty")
    usable_entries = []
    for entry in history.entries:
        if entry not in config.declared_ids():
            errors.append(f"history entry {entry!r} is not declared in the project")
        elif entry in texts:
            usable_entries.append(entry)

    # Dry-run the link plan over whatever part of the history parsed.
    usable_history = ReadingHistory(entries=tuple(usable_entries))
    index = build_index(usable_history, texts)
    plan_site(config.output_dir, usable_history, index)
    for entry in usable_entries:
        for segment in texts[entry].segments:
            if segment.audio_resource_id is None:
                continue
            try:
                resolve_resource(segment.audio_resource_id, manifests)
            except ReadforgeError:
                warnings.append(
                    f"text {entry!r} segment {segment.index}: audio resource "
                    f"{segment.audio_resource_id!r} is unresolved"
                )

    return warnings, errors


def add_history_entry(config: ProjectConfig, text_id: str) -> int:
    """Append a declared, unread text to the history file; returns the new length."""
    if text_id not in config.declared_ids():
        raise UnknownText(f"text {text_id!r} is not declared in the project")
    history = read_history_file(config.history_path)
    if text_id in history.entries:
        raise DuplicateText(f"text {text_id!r} is already in the history")
    extended = ReadingHistory(entries=history.entries + (text_id,))
    write_history_file(config.history_path, extended)
    return len(extended.entries)
