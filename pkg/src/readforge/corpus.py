"""Core domain model: texts, segments, tokens, histories, and frequency bands.

All values are immutable after construction and safe to share between
concurrent tasks. Constructors stay permissive so that malformed data can
be represented and reported; :func:`validate_text` is the gate that turns
broken invariants into violation descriptions.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass, field

from .errors import DuplicateText, HistoryMiss

# Grammar shared by text ids and audio resource ids.
RESOURCE_ID_RE = re.compile(r"[a-z0-9_]+")


def normalize_lemma(raw: str) -> str:
    """Canonical lemma form: case-folded, then Unicode NFC."""
    return unicodedata.normalize("NFC", raw.casefold())


class TokenKind(enum.Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"


class FrequencyBand(enum.IntEnum):
    """Exposure bands, ordered rarest to most familiar."""

    RED = 1
    GREEN = 2
    BLUE = 3
    BLACK = 4


@dataclass(frozen=True, slots=True)
class Token:
    """One token of a segment.

    ``surface`` is the text verbatim; ``lemma`` is the canonical dictionary
    form (empty for punctuation, and for word tokens fresh out of the
    tokenizer before lemma assignment). ``char_span`` is a half-open
    (start, end) offset pair into the owning segment's raw text.
    """

    surface: str
    lemma: str
    kind: TokenKind
    char_span: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "char_span", tuple(self.char_span))


@dataclass(frozen=True, slots=True)
class Segment:
    """An authorially chosen span of text; the unit of audio recording."""

    index: int
    raw_text: str
    tokens: tuple[Token, ...]
    audio_resource_id: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))


@dataclass(frozen=True, slots=True)
class AnnotatedText:
    """A source text parsed into ordered, lemma-tagged segments."""

    text_id: str
    title: str
    language: str
    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))


@dataclass(frozen=True, slots=True)
class ReadingHistory:
    """Ordered list of text ids the learner has read, earliest first."""

    entries: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        seen: set[str] = set()
        for text_id in entries:
            if text_id in seen:
                raise DuplicateText(f"text {text_id!r} appears twice in the history")
            seen.add(text_id)


@dataclass(frozen=True, slots=True)
class Occurrence:
    """Position of one word token inside one history text."""

    text_id: str
    segment_index: int
    token_index: int


@dataclass(frozen=True, slots=True)
class LemmaIndex:
    """Cumulative per-lemma counts and occurrence locations over a history.

    Occurrence lists are kept in reading order: history order first, then
    segment index, then token index.
    """

    counts: dict[str, int] = field(default_factory=dict)
    occurrences: dict[str, tuple[Occurrence, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "occurrences", {k: tuple(v) for k, v in self.occurrences.items()}
        )


def reading_order_key(occurrence: Occurrence, history: ReadingHistory) -> tuple[int, int, int]:
    """Sortable key realizing "previously occurred" order over a history.

    Raises HistoryMiss when the occurrence's text is not in the history.
    """
    try:
        position = history.entries.index(occurrence.text_id)
    except ValueError:
        raise HistoryMiss(
            f"occurrence refers to text {occurrence.text_id!r} which is not in the history"
        ) from None
    return (position, occurrence.segment_index, occurrence.token_index)


def validate_text(text: AnnotatedText) -> list[str]:
    """Check every AnnotatedText invariant; return one description per violation.

    Violations are data, not failures: callers decide whether to abort.
    """
    violations: list[str] = []

    if not RESOURCE_ID_RE.fullmatch(text.text_id):
        violations.append(
            f"text id {text.text_id!r} does not match the resource-id grammar [a-z0-9_]+"
        )
    if not text.segments:
        violations.append(f"text {text.text_id!r} has no segments")

    for position, segment in enumerate(text.segments):
        where = f"text {text.text_id!r} segment {position}"
        if segment.index != position:
            violations.append(
                f"{where}: segment index gap/duplicate (index {segment.index} at position {position})"
            )
        if segment.audio_resource_id is not None and not RESOURCE_ID_RE.fullmatch(
            segment.audio_resource_id
        ):
            violations.append(
                f"{where}: audio resource id {segment.audio_resource_id!r} does not match [a-z0-9_]+"
            )

        previous_end = 0
        for token_index, token in enumerate(segment.tokens):
            at = f"{where} token {token_index}"
            start, end = token.char_span
            if token.kind is TokenKind.WORD and not token.lemma:
                violations.append(f"{at}: word token {token.surface!r} has an empty lemma")
            if token.kind is TokenKind.PUNCTUATION and token.lemma:
                violations.append(
                    f"{at}: punctuation token {token.surface!r} carries a lemma"
                )
            if start >= end:
                violations.append(f"{at}: char_span {token.char_span} is not start < end")
                continue
            if start < previous_end:
                violations.append(
                    f"{at}: char_span {token.char_span} overlaps or reorders the previous token"
                )
            if end > len(segment.raw_text):
                violations.append(f"{at}: char_span {token.char_span} exceeds the raw text")
            elif segment.raw_text[start:end] != token.surface:
                violations.append(
                    f"{at}: surface {token.surface!r} does not match raw text at {token.char_span}"
                )
            previous_end = max(previous_end, end)

    return violations


def validate_index(index: LemmaIndex) -> list[str]:
    """Check LemmaIndex consistency: counts agree with occurrence-list lengths."""
    violations = []
    for lemma, count in index.counts.items():
        found = len(index.occurrences.get(lemma, ()))
        if count != found:
            violations.append(
                f"lemma {lemma!r}: count {count} != {found} recorded occurrences"
            )
    for lemma in index.occurrences:
        if lemma not in index.counts:
            violations.append(f"lemma {lemma!r} has occurrences but no count")
    return violations
