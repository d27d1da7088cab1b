"""Corpus builders, project fixtures, and independent oracles.

The oracles deliberately use different constructions than the code under
test: counting via Counter over a flat token scan, occurrence ordering via
an explicit sort on reading_order_key, and tokenization via mark-and-group
instead of a single forward scan.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from html.parser import HTMLParser
from pathlib import Path

from readforge.corpus import (
    AnnotatedText,
    Occurrence,
    ReadingHistory,
    Segment,
    Token,
    TokenKind,
    reading_order_key,
)

Piece = tuple[str, str | None]  # (surface, lemma) word, or (surface, None) punctuation


def build_segment(
    index: int, pieces: list[Piece], audio_resource_id: str | None = None
) -> Segment:
    """Assemble a segment from pieces joined by single spaces."""
    tokens: list[Token] = []
    raw_parts: list[str] = []
    cursor = 0
    for i, (surface, lemma) in enumerate(pieces):
        if i:
            raw_parts.append(" ")
            cursor += 1
        kind = TokenKind.WORD if lemma is not None else TokenKind.PUNCTUATION
        tokens.append(
            Token(
                surface=surface,
                lemma=lemma or "",
                kind=kind,
                char_span=(cursor, cursor + len(surface)),
            )
        )
        raw_parts.append(surface)
        cursor += len(surface)
    return Segment(
        index=index,
        raw_text="".join(raw_parts),
        tokens=tuple(tokens),
        audio_resource_id=audio_resource_id,
    )


def build_text(
    text_id: str,
    segment_pieces: list[list[Piece]],
    title: str | None = None,
    language: str = "en",
    with_audio: bool = True,
) -> AnnotatedText:
    segments = [
        build_segment(
            i,
            pieces,
            audio_resource_id=f"{text_id}_seg_{i:04d}" if with_audio else None,
        )
        for i, pieces in enumerate(segment_pieces)
    ]
    return AnnotatedText(
        text_id=text_id,
        title=title or text_id.upper(),
        language=language,
        segments=tuple(segments),
    )


_SURFACES = [
    "rabbit", "rabbits", "garden", "gardens", "take", "took", "taken",
    "run", "ran", "runs", "peter", "alice", "the", "a", "saw", "see",
    "small", "door", "doors", "key",
]
_LEMMAS = ["rabbit", "garden", "take", "run", "peter", "alice", "the", "a", "see", "small", "door", "key"]
_PUNCT = [".", ",", "!", "?", ";"]


def random_corpus(
    rng: random.Random, max_texts: int = 5, max_tokens_per_text: int = 50
) -> tuple[ReadingHistory, dict[str, AnnotatedText]]:
    """Small randomized corpus; lemmas are drawn independently of surfaces
    so inflected groupings occur often."""
    n_texts = rng.randint(1, max_texts)
    texts: dict[str, AnnotatedText] = {}
    ids: list[str] = []
    for t in range(n_texts):
        text_id = f"text_{t}"
        budget = rng.randint(1, max_tokens_per_text)
        segment_pieces: list[list[Piece]] = []
        remaining = budget
        while remaining > 0:
            size = min(rng.randint(1, 8), remaining)
            pieces: list[Piece] = []
            for _ in range(size):
                if rng.random() < 0.15:
                    pieces.append((rng.choice(_PUNCT), None))
                else:
                    pieces.append((rng.choice(_SURFACES), rng.choice(_LEMMAS)))
            segment_pieces.append(pieces)
            remaining -= size
        texts[text_id] = build_text(
            text_id, segment_pieces, with_audio=rng.random() < 0.8
        )
        ids.append(text_id)
    return ReadingHistory(entries=tuple(ids)), texts


def oracle_index(
    history: ReadingHistory, texts: dict[str, AnnotatedText]
) -> tuple[Counter, dict[str, list[Occurrence]]]:
    """Brute-force lemma counts and reading-ordered occurrence lists."""
    counts: Counter = Counter()
    pairs: list[tuple[str, Occurrence]] = []
    for text_id in history.entries:
        for segment in texts[text_id].segments:
            for token_index, token in enumerate(segment.tokens):
                if token.kind is TokenKind.WORD:
                    counts[token.lemma] += 1
                    pairs.append(
                        (token.lemma, Occurrence(text_id, segment.index, token_index))
                    )
    occurrences: dict[str, list[Occurrence]] = {}
    for lemma, occurrence in sorted(
        pairs, key=lambda p: (p[0],) + reading_order_key(p[1], history)
    ):
        occurrences.setdefault(lemma, []).append(occurrence)
    return counts, occurrences


def oracle_concordance_rows(
    lemma: str, history: ReadingHistory, texts: dict[str, AnnotatedText]
) -> list[tuple[str, int, tuple[int, ...]]]:
    """Brute-force scan of all history segments for a lemma."""
    rows = []
    for text_id in history.entries:
        for segment in texts[text_id].segments:
            hits = tuple(
                i
                for i, token in enumerate(segment.tokens)
                if token.kind is TokenKind.WORD and token.lemma == lemma
            )
            if hits:
                rows.append((text_id, segment.index, hits))
    return rows


def oracle_tokenize(raw: str) -> list[tuple[str, str, tuple[int, int]]]:
    """Mark word characters, merge joiners with letters on both sides,
    then group maximal runs. Returns (kind, surface, span) triples."""
    n = len(raw)
    is_word = [ch.isalpha() or ch.isdigit() for ch in raw]
    for i, ch in enumerate(raw):
        if (
            ch in ("'", "’", "-")
            and 0 < i < n - 1
            and raw[i - 1].isalpha()
            and raw[i + 1].isalpha()
        ):
            is_word[i] = True
    out: list[tuple[str, str, tuple[int, int]]] = []
    i = 0
    while i < n:
        if raw[i].isspace():
            i += 1
        elif is_word[i]:
            j = i
            while j < n and is_word[j]:
                j += 1
            out.append(("word", raw[i:j], (i, j)))
            i = j
        else:
            out.append(("punctuation", raw[i], (i, i + 1)))
            i += 1
    return out


def write_project(
    root: Path,
    *,
    texts: dict[str, str] | None = None,
    packages: dict[str, str] | None = None,
    history: list[str] | None = None,
    manifest: dict | None = None,
    lexicon: str | None = None,
    thresholds: dict | None = None,
    logging_enabled: bool | None = None,
    titles: dict[str, str] | None = None,
    output_dir: str = "site",
    history_name: str = "history.txt",
    config_name: str = "project.json",
) -> Path:
    """Write a complete project fixture; returns the config path."""
    root.mkdir(parents=True, exist_ok=True)
    declared = []
    for text_id, source in (texts or {}).items():
        (root / f"{text_id}.lara.txt").write_text(source, encoding="utf-8")
        declared.append(
            {
                "text_id": text_id,
                "source_path": f"{text_id}.lara.txt",
                "title": (titles or {}).get(text_id, text_id.upper()),
                "language": "en",
            }
        )
    for text_id, url in (packages or {}).items():
        declared.append({"text_id": text_id, "package_url": url})

    (root / history_name).write_text(
        "".join(f"{t}\n" for t in (history or [])), encoding="utf-8"
    )

    config: dict = {
        "project_id": "fixture",
        "texts": declared,
        "history_path": history_name,
        "output_dir": output_dir,
    }
    if manifest is not None:
        (root / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
        config["manifest_paths"] = ["manifest.json"]
    if lexicon is not None:
        (root / "lexicon.lex.tsv").write_text(lexicon, encoding="utf-8")
        config["lexicon_path"] = "lexicon.lex.tsv"
    if thresholds is not None:
        config["thresholds"] = thresholds
    if logging_enabled is not None:
        config["logging_enabled"] = logging_enabled

    config_path = root / config_name
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return config_path


class WordElementCollector(HTMLParser):
    """Pulls rendered word elements back out of an emitted page."""

    def __init__(self) -> None:
        super().__init__()
        self.words: list[dict] = []
        self._open: dict | None = None

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        attrs_map = dict(attrs)
        classes = (attrs_map.get("class") or "").split()
        if tag == "a" and "rf-word" in classes:
            band = next((c for c in classes if c.startswith("band-")), None)
            self._open = {
                "lemma": attrs_map.get("data-lemma"),
                "band": band,
                "href": attrs_map.get("href"),
                "surface": "",
            }

    def handle_data(self, data: str) -> None:
        if self._open is not None:
            self._open["surface"] += data

    def handle_endtag(self, tag: str) -> None:
        if tag == "a" and self._open is not None:
            self.words.append(self._open)
            self._open = None


def collect_word_elements(page_bytes: bytes) -> list[dict]:
    collector = WordElementCollector()
    collector.feed(page_bytes.decode("utf-8"))
    return collector.words


def snapshot_tree(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


class RecordingFetcher:
    """Test fetcher: serves canned bodies and records every requested URL."""

    def __init__(self, responses: dict[str, bytes], forbid_suffixes: tuple[str, ...] = ()):
        self.responses = responses
        self.forbid_suffixes = forbid_suffixes
        self.requests: list[str] = []

    def __call__(self, url: str) -> bytes:
        self.requests.append(url)
        for suffix in self.forbid_suffixes:
            if url.endswith(suffix):
                raise AssertionError(f"media URL fetched: {url}")
        body = self.responses.get(url)
        if body is None:
            from readforge.errors import FetchFailure

            raise FetchFailure(f"GET {url} failed: HTTP 404", status=404)
        return body


def package_fixture(
    base: str, text_id: str, source: str, *, title: str = "Remote", audio_ids: list[str] | None = None
) -> tuple[str, dict[str, bytes], list[str]]:
    """Build descriptor+text responses for one remote package.

    Returns (descriptor_url, responses, media_urls). Audio locators point at
    .mp3 URLs that must never be fetched.
    """
    descriptor_url = f"{base}/package.json"
    text_url = f"{base}/{text_id}.lara.txt"
    from readforge.parsing import parse_text

    parsed, _ = parse_text(source, text_id, title, "en")
    ids = audio_ids if audio_ids is not None else [
        s.audio_resource_id for s in parsed.segments
    ]
    audio = {rid: f"{base}/media/{rid}.mp3" for rid in ids}
    descriptor = {
        "text_id": text_id,
        "title": title,
        "language": "en",
        "text_url": text_url,
        "audio": audio,
    }
    responses = {
        descriptor_url: json.dumps(descriptor).encode("utf-8"),
        text_url: source.encode("utf-8"),
    }
    return descriptor_url, responses, list(audio.values())
