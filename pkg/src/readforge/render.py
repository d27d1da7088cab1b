"""Serializes the compiled model into a static site.

Layout: ``texts/<text_id>.html``, ``concordance/<slug>.html``,
``static/reader.js``, ``static/style.css``, and ``site.json`` (the
machine-readable plan). Output is deterministic: identical inputs produce
byte-identical trees. Band colors are emitted as the four fixed style
classes so a site can be restyled without recompiling.
"""

from __future__ import annotations

import html
import json
import os
import posixpath
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .concordance import ConcordancePage
from .corpus import (
    AnnotatedText,
    FrequencyBand,
    LemmaIndex,
    ReadingHistory,
    TokenKind,
)
from .errors import EmptyHistory, HistoryMiss, MissingResource, NotInHistory, OutputIoError
from .history import BandThresholds, band_for_count
from .manifest import ResourceManifest, resolve_resource

BAND_CLASSES = {
    FrequencyBand.RED: "band-red",
    FrequencyBand.GREEN: "band-green",
    FrequencyBand.BLUE: "band-blue",
    FrequencyBand.BLACK: "band-black",
}

ASSET_NAMES = ("reader.js", "style.css")

_SLUG_SAFE = frozenset("abcdefghijklmnopqrstuvwxyz0123456789-")


@dataclass(frozen=True, slots=True)
class SitePlan:
    """Where every page and asset of the compiled site lives, site-relative."""

    output_dir: Path
    text_pages: dict[str, str]
    concordance_pages: dict[str, str]
    asset_paths: tuple[str, ...]


def slug_for_lemma(lemma: str) -> str:
    """Path-safe, injective lemma slug.

    Characters in [a-z0-9-] pass through; every other character becomes
    ``_<lowercase hex code point>_``. Underscore itself is always encoded,
    which is what makes the mapping injective.
    """
    if not lemma:
        raise ValueError("lemma must be non-empty")
    normalized = unicodedata.normalize("NFC", lemma).lower()
    return "".join(
        ch if ch in _SLUG_SAFE else f"_{ord(ch):x}_" for ch in normalized
    )


def plan_site(output_dir: Path, history: ReadingHistory, index: LemmaIndex) -> SitePlan:
    text_pages = {text_id: f"texts/{text_id}.html" for text_id in history.entries}
    concordance_pages = {
        lemma: f"concordance/{slug_for_lemma(lemma)}.html" for lemma in sorted(index.counts)
    }
    all_paths = (
        list(text_pages.values())
        + list(concordance_pages.values())
        + [f"static/{name}" for name in ASSET_NAMES]
    )
    if len(set(all_paths)) != len(all_paths):
        raise ValueError("site plan produced colliding output paths")
    return SitePlan(
        output_dir=output_dir,
        text_pages=text_pages,
        concordance_pages=concordance_pages,
        asset_paths=tuple(f"static/{name}" for name in ASSET_NAMES),
    )


def _rel_href(from_page: str, to_path: str) -> str:
    return posixpath.relpath(to_path, posixpath.dirname(from_page) or ".")


def _esc(text: str) -> str:
    return html.escape(text, quote=False)


def _esc_attr(text: str) -> str:
    return html.escape(text, quote=True)


def _page_head(title: str, page_rel: str, plan: SitePlan) -> list[str]:
    style_href = _rel_href(page_rel, "static/style.css")
    script_href = _rel_href(page_rel, "static/reader.js")
    return [
        "<head>",
        '<meta charset="utf-8">',
        '<meta name="viewport" content="width=device-width, initial-scale=1">',
        f"<title>{_esc(title)}</title>",
        f'<link rel="stylesheet" href="{_esc_attr(style_href)}">',
        f'<script defer src="{_esc_attr(script_href)}"></script>',
        "</head>",
    ]


def _audio_control(
    audio_resource_id: str | None,
    manifests: list[ResourceManifest],
    warnings: list[str],
    context: str,
) -> str:
    """Loudspeaker control for a segment; degrades to disabled when unresolvable."""
    if audio_resource_id is not None:
        try:
            url = resolve_resource(audio_resource_id, manifests)
        except MissingResource:
            warnings.append(f"{context}: audio resource {audio_resource_id!r} is unresolved")
        else:
            return (
                f'<a class="rf-audio" href="{_esc_attr(url)}" data-audio="{_esc_attr(url)}" '
                f'data-resource="{_esc_attr(audio_resource_id)}" '
                f'aria-label="Play segment audio">&#128266;</a>'
            )
    return (
        '<span class="rf-audio rf-audio-disabled" aria-disabled="true" '
        'title="Audio unavailable">&#128266;</span>'
    )


def _consent_value(consent: bool) -> str:
    return "true" if consent else "false"


def render_text_page(
    text: AnnotatedText,
    index: LemmaIndex,
    thresholds: BandThresholds,
    manifests: list[ResourceManifest],
    plan: SitePlan,
    consent: bool = False,
) -> tuple[bytes, list[str]]:
    """Render one marked-up text page.

    Every word token becomes a banded hyperlink to its lemma's concordance
    page; punctuation and inter-token gaps are emitted as plain escaped
    text; each segment ends with a loudspeaker control.
    """
    page_rel = plan.text_pages[text.text_id]
    warnings: list[str] = []
    out = [
        "<!DOCTYPE html>",
        f'<html lang="{_esc_attr(text.language)}" data-rf-consent="{_consent_value(consent)}" '
        f'data-rf-kind="text" data-rf-text-id="{_esc_attr(text.text_id)}">',
        *_page_head(text.title, page_rel, plan),
        "<body>",
        '<main class="rf-text">',
        f"<h1>{_esc(text.title)}</h1>",
    ]

    for segment in text.segments:
        parts: list[str] = []
        cursor = 0
        for token in segment.tokens:
            start, end = token.char_span
            if start > cursor:
                parts.append(_esc(segment.raw_text[cursor:start]))
            if token.kind is TokenKind.WORD:
                count = index.counts.get(token.lemma)
                if count is None:
                    raise NotInHistory(
                        f"lemma {token.lemma!r} in text {text.text_id!r} is absent "
                        "from the index; the displayed text must be part of the history"
                    )
                band_class = BAND_CLASSES[band_for_count(count, thresholds)]
                href = _rel_href(page_rel, plan.concordance_pages[token.lemma])
                parts.append(
                    f'<a class="rf-word {band_class}" href="{_esc_attr(href)}" '
                    f'data-lemma="{_esc_attr(token.lemma)}">{_esc(token.surface)}</a>'
                )
            else:
                parts.append(_esc(token.surface))
            cursor = end
        if cursor < len(segment.raw_text):
            parts.append(_esc(segment.raw_text[cursor:]))
        control = _audio_control(
            segment.audio_resource_id,
            manifests,
            warnings,
            f"text {text.text_id!r} segment {segment.index}",
        )
        out.append(
            f'<p class="rf-segment" id="seg-{segment.index:04d}" '
            f'data-segment-index="{segment.index}">{"".join(parts)} {control}</p>'
        )

    out += ["</main>", "</body>", "</html>", ""]
    return "\n".join(out).encode("utf-8"), warnings


def render_concordance_page(
    page: ConcordancePage,
    texts: dict[str, AnnotatedText],
    manifests: list[ResourceManifest],
    plan: SitePlan,
    consent: bool = False,
) -> tuple[bytes, list[str]]:
    """Render one lemma's concordance page.

    Each entry shows its segment with every target token highlighted,
    labeled with the source title linking back to the text page, followed
    by the segment's loudspeaker control.
    """
    page_rel = plan.concordance_pages[page.lemma]
    warnings: list[str] = []
    out = [
        "<!DOCTYPE html>",
        f'<html data-rf-consent="{_consent_value(consent)}" data-rf-kind="concordance" '
        f'data-rf-lemma="{_esc_attr(page.lemma)}">',
        *_page_head(page.lemma, page_rel, plan),
        "<body>",
        '<main class="rf-concordance">',
        f"<h1>{_esc(page.lemma)}</h1>",
    ]
    if page.total_segment_count > len(page.entries):
        out.append(
            f'<p class="rf-showing">Showing {len(page.entries)} of '
            f"{page.total_segment_count} segments.</p>"
        )
    out.append('<ol class="rf-entries">')

    for entry in page.entries:
        text = texts.get(entry.text_id)
        if text is None:
            raise HistoryMiss(f"concordance entry refers to unloaded text {entry.text_id!r}")
        segment = text.segments[entry.segment_index]
        highlighted = set(entry.highlight_token_indices)
        parts: list[str] = []
        cursor = 0
        for token_index, token in enumerate(segment.tokens):
            start, end = token.char_span
            if start > cursor:
                parts.append(_esc(segment.raw_text[cursor:start]))
            if token_index in highlighted:
                parts.append(f'<mark class="rf-hit">{_esc(token.surface)}</mark>')
            else:
                parts.append(_esc(token.surface))
            cursor = end
        if cursor < len(segment.raw_text):
            parts.append(_esc(segment.raw_text[cursor:]))

        source_href = _rel_href(page_rel, plan.text_pages[entry.text_id])
        source_href += f"#seg-{entry.segment_index:04d}"
        control = _audio_control(
            entry.audio_resource_id,
            manifests,
            warnings,
            f"concordance {page.lemma!r} entry {entry.text_id}/{entry.segment_index}",
        )
        out.append(
            '<li class="rf-entry">'
            f'<a class="rf-entry-source" href="{_esc_attr(source_href)}">'
            f"{_esc(entry.text_title)}</a>"
            f'<blockquote class="rf-entry-text">{"".join(parts)} {control}</blockquote>'
            "</li>"
        )

    out += ["</ol>", "</main>", "</body>", "</html>", ""]
    return "\n".join(out).encode("utf-8"), warnings


def _asset_bytes(name: str) -> bytes:
    return (resources.files("readforge") / "assets" / name).read_bytes()


def _site_json(plan: SitePlan) -> bytes:
    inventory = {
        "texts": plan.text_pages,
        "concordances": plan.concordance_pages,
        "assets": list(plan.asset_paths),
    }
    return (json.dumps(inventory, ensure_ascii=False, indent=2, sort_keys=True) + "\n").encode(
        "utf-8"
    )


def _atomic_write(path: Path, data: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)
    except OSError as exc:
        raise OutputIoError(f"failed to write {path}: {exc}") from exc


def emit_site(
    history: ReadingHistory,
    texts: dict[str, AnnotatedText],
    index: LemmaIndex,
    concordances: dict[str, ConcordancePage],
    manifests: list[ResourceManifest],
    thresholds: BandThresholds,
    output_dir: Path,
    consent: bool = False,
) -> tuple[SitePlan, list[str]]:
    """Write the whole site; returns the plan and accumulated warnings.

    Every file is written atomically (temp file, then rename), and repeated
    runs on identical inputs are byte-identical.
    """
    if not history.entries:
        raise EmptyHistory("the reading history is empty; nothing to compile")
    plan = plan_site(output_dir, history, index)
    warnings: list[str] = []
    files: dict[str, bytes] = {}

    for text_id in history.entries:
        text = texts.get(text_id)
        if text is None:
            raise HistoryMiss(f"history entry {text_id!r} has no loaded text")
        page, page_warnings = render_text_page(
            text, index, thresholds, manifests, plan, consent=consent
        )
        files[plan.text_pages[text_id]] = page
        warnings.extend(page_warnings)

    for lemma in sorted(concordances):
        page, page_warnings = render_concordance_page(
            concordances[lemma], texts, manifests, plan, consent=consent
        )
        files[plan.concordance_pages[lemma]] = page
        warnings.extend(page_warnings)

    for name in ASSET_NAMES:
        files[f"static/{name}"] = _asset_bytes(name)
    files["site.json"] = _site_json(plan)

    for relative in sorted(files):
        _atomic_write(output_dir / relative, files[relative])

    return plan, warnings
