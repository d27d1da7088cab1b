"""Builds the personalized per-lemma concordance page models."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .corpus import AnnotatedText, LemmaIndex, ReadingHistory, reading_order_key
from .errors import HistoryMiss, UnknownLemma

DEFAULT_SEGMENT_LIMIT = 10


@dataclass(frozen=True, slots=True)
class ConcordanceEntry:
    """One history segment containing the target lemma.

    ``highlight_token_indices`` lists every token in the segment whose
    lemma is the target, so inflected forms are all marked.
    """

    text_id: str
    text_title: str
    segment_index: int
    raw_text: str
    highlight_token_indices: tuple[int, ...]
    audio_resource_id: str | None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "highlight_token_indices", tuple(self.highlight_token_indices)
        )


@dataclass(frozen=True, slots=True)
class ConcordancePage:
    """Up to ``limit`` segments where a lemma appears, in reading order.

    ``total_segment_count`` reports the uncapped number of distinct
    segments so pages can say "showing K of N".
    """

    lemma: str
    total_segment_count: int
    entries: tuple[ConcordanceEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))


def build_concordance(
    lemma: str,
    index: LemmaIndex,
    history: ReadingHistory,
    texts: dict[str, AnnotatedText],
    limit: int = DEFAULT_SEGMENT_LIMIT,
) -> ConcordancePage:
    """Group a lemma's occurrences by distinct segment and keep the first
    ``limit`` segments in reading order.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    occurrences = index.occurrences.get(lemma)
    if occurrences is None:
        raise UnknownLemma(f"lemma {lemma!r} is not in the index")

    ordered = sorted(occurrences, key=lambda o: reading_order_key(o, history))
    grouped: dict[tuple[str, int], list[int]] = {}
    for occurrence in ordered:
        key = (occurrence.text_id, occurrence.segment_index)
        grouped.setdefault(key, []).append(occurrence.token_index)

    entries: list[ConcordanceEntry] = []
    for (text_id, segment_index), token_indices in islice(grouped.items(), limit):
        text = texts.get(text_id)
        if text is None:
            raise HistoryMiss(f"occurrence refers to unloaded text {text_id!r}")
        segment = text.segments[segment_index]
        entries.append(
            ConcordanceEntry(
                text_id=text_id,
                text_title=text.title,
                segment_index=segment_index,
                raw_text=segment.raw_text,
                highlight_token_indices=tuple(token_indices),
                audio_resource_id=segment.audio_resource_id,
            )
        )

    return ConcordancePage(
        lemma=lemma, total_segment_count=len(grouped), entries=tuple(entries)
    )


def build_all_concordances(
    index: LemmaIndex,
    history: ReadingHistory,
    texts: dict[str, AnnotatedText],
    limit: int = DEFAULT_SEGMENT_LIMIT,
) -> dict[str, ConcordancePage]:
    """One page per indexed lemma, keyed and ordered by lemma for determinism."""
    return {
        lemma: build_concordance(lemma, index, history, texts, limit)
        for lemma in sorted(index.counts)
    }
