"""Resource manifests: load, resolve ids to URLs, import remote text packages.

Resolution never touches the network; only :func:`import_package` fetches,
and it fetches exactly two things per package (the descriptor and the text
source). Audio stays remote: its locators are recorded, never downloaded.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import urlsplit

from .corpus import RESOURCE_ID_RE, AnnotatedText, validate_text
from .errors import (
    BadPackage,
    EmptyText,
    FetchFailure,
    MalformedManifest,
    MissingResource,
    RelativeWithoutBase,
)
from .parsing import parse_text

# Injected dependency for everything remote; returns the body bytes or
# raises FetchFailure. Keeping it a plain callable lets tests count and
# forbid calls.
Fetcher = Callable[[str], bytes]


@dataclass(frozen=True, slots=True)
class ResourceManifest:
    """Maps resource ids to absolute URLs or to paths under ``base_url``."""

    base_url: str | None = None
    resources: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class TextPackage:
    """An imported remote text plus the manifest fragment for its audio."""

    text: AnnotatedText
    manifest_fragment: ResourceManifest


def is_absolute_locator(locator: str) -> bool:
    return bool(urlsplit(locator).scheme)


def join_url(base: str, relative: str) -> str:
    """Join with exactly one '/' between; never collapses path components."""
    return base.rstrip("/") + "/" + relative.lstrip("/")


def _check_manifest(base_url: str | None, resources: dict[str, str], origin: str) -> None:
    for resource_id, locator in resources.items():
        if not isinstance(resource_id, str) or not RESOURCE_ID_RE.fullmatch(resource_id):
            raise MalformedManifest(
                f"{origin}: resource id {resource_id!r} does not match [a-z0-9_]+"
            )
        if not isinstance(locator, str) or not locator:
            raise MalformedManifest(f"{origin}: locator for {resource_id!r} is empty")
        if not is_absolute_locator(locator) and base_url is None:
            raise RelativeWithoutBase(
                f"{origin}: relative locator {locator!r} for {resource_id!r} "
                "but no base_url is declared"
            )


def load_manifest(source: str, origin: str = "manifest") -> tuple[ResourceManifest, list[str]]:
    """Parse and validate manifest JSON; unknown top-level keys warn only."""
    try:
        data = json.loads(source)
    except ValueError as exc:
        raise MalformedManifest(f"{origin}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise MalformedManifest(f"{origin}: top level must be a JSON object")

    warnings = [
        f"{origin}: ignoring unknown manifest key {key!r}"
        for key in data
        if key not in ("base_url", "resources")
    ]

    base_url = data.get("base_url")
    if base_url is not None and not isinstance(base_url, str):
        raise MalformedManifest(f"{origin}: base_url must be a string")
    resources = data.get("resources")
    if not isinstance(resources, dict):
        raise MalformedManifest(f"{origin}: missing or non-object 'resources'")

    _check_manifest(base_url, resources, origin)
    return ResourceManifest(base_url=base_url, resources=dict(resources)), warnings


def resolve_resource(resource_id: str, manifests: list[ResourceManifest]) -> str:
    """Resolve an id to its locator URL; first manifest containing it wins."""
    if not RESOURCE_ID_RE.fullmatch(resource_id):
        raise ValueError(f"resource id {resource_id!r} does not match [a-z0-9_]+")
    for manifest in manifests:
        locator = manifest.resources.get(resource_id)
        if locator is None:
            continue
        if is_absolute_locator(locator):
            return locator
        if manifest.base_url is None:
            raise RelativeWithoutBase(
                f"relative locator {locator!r} for {resource_id!r} but no base_url"
            )
        return join_url(manifest.base_url, locator)
    raise MissingResource(f"resource {resource_id!r} found in no manifest")


def http_fetcher(url: str) -> bytes:
    """Default fetcher; raises FetchFailure with the HTTP status on error."""
    try:
        with urllib.request.urlopen(url, timeout=30) as response:
            return response.read()
    except urllib.error.HTTPError as exc:
        raise FetchFailure(f"GET {url} failed: HTTP {exc.code}", status=exc.code) from exc
    except (urllib.error.URLError, OSError) as exc:
        raise FetchFailure(f"GET {url} failed: {exc}") from exc


def offline_fetcher(url: str) -> bytes:
    """Fetcher used when the environment forbids all network access."""
    raise FetchFailure(f"network access disabled, refusing to fetch {url}")


_DESCRIPTOR_STRING_FIELDS = ("text_id", "title", "language", "text_url")


def import_package(url: str, fetcher: Fetcher) -> tuple[TextPackage, list[str]]:
    """Import a remote text package from its descriptor URL.

    Fetches only the descriptor and the text source (two requests); audio
    locators are recorded verbatim in the returned manifest fragment.
    Returns the package plus diagnostics, including one per segment whose
    audio id the fragment does not cover.
    """
    descriptor_bytes = fetcher(url)
    try:
        descriptor = json.loads(descriptor_bytes)
    except ValueError as exc:
        raise BadPackage(f"package descriptor at {url} is not valid JSON") from exc
    if not isinstance(descriptor, dict):
        raise BadPackage(f"package descriptor at {url} must be a JSON object")

    for fld in _DESCRIPTOR_STRING_FIELDS:
        if not isinstance(descriptor.get(fld), str) or not descriptor[fld]:
            raise BadPackage(f"package descriptor at {url}: missing or empty {fld!r}")
    text_id = descriptor["text_id"]
    if not RESOURCE_ID_RE.fullmatch(text_id):
        raise BadPackage(
            f"package descriptor at {url}: text_id {text_id!r} does not match [a-z0-9_]+"
        )
    audio = descriptor.get("audio", {})
    if not isinstance(audio, dict):
        raise BadPackage(f"package descriptor at {url}: 'audio' must be an object")
    base_url = descriptor.get("base_url")
    if base_url is not None and not isinstance(base_url, str):
        raise BadPackage(f"package descriptor at {url}: base_url must be a string")

    try:
        _check_manifest(base_url, audio, f"package {text_id}")
    except (MalformedManifest, RelativeWithoutBase) as exc:
        raise BadPackage(str(exc)) from exc
    fragment = ResourceManifest(base_url=base_url, resources=dict(audio))

    text_url = descriptor["text_url"]
    if not is_absolute_locator(text_url):
        text_url = join_url(url.rsplit("/", 1)[0], text_url)
    try:
        text_source = fetcher(text_url).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise BadPackage(f"package text at {text_url} is not valid UTF-8") from exc

    try:
        text, parse_diagnostics = parse_text(
            text_source, text_id, descriptor["title"], descriptor["language"]
        )
    except EmptyText as exc:
        raise BadPackage(f"package text at {text_url} has no segments") from exc
    violations = validate_text(text)
    if violations:
        raise BadPackage(
            f"package text {text_id!r} failed validation: " + "; ".join(violations)
        )

    diagnostics = [f"package {text_id}: {diag}" for diag in map(str, parse_diagnostics)]
    for segment in text.segments:
        if segment.audio_resource_id not in fragment.resources:
            diagnostics.append(
                f"package {text_id}: missing audio for segment {segment.index} "
                f"({segment.audio_resource_id})"
            )

    return TextPackage(text=text, manifest_fragment=fragment), diagnostics
