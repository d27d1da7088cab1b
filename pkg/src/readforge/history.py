"""Folds a reading history into a lemma index and maps counts to bands."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .corpus import (
    AnnotatedText,
    FrequencyBand,
    LemmaIndex,
    Occurrence,
    ReadingHistory,
    TokenKind,
)
from .errors import DuplicateText, HistoryMiss, NotInHistory


@dataclass(frozen=True, slots=True)
class BandThresholds:
    """Upper count bounds for the red, green, and blue bands.

    A count of 1 is always red and a count above ``blue_max`` is always
    black under the defaults; the green/blue split in between is
    configurable.
    """

    red_max: int = 1
    green_max: int = 3
    blue_max: int = 5

    def __post_init__(self) -> None:
        if not 1 <= self.red_max < self.green_max < self.blue_max:
            raise ValueError(
                f"thresholds must satisfy 1 <= red_max < green_max < blue_max, "
                f"got {self.red_max}, {self.green_max}, {self.blue_max}"
            )


DEFAULT_THRESHOLDS = BandThresholds()


def band_for_count(count: int, thresholds: BandThresholds = DEFAULT_THRESHOLDS) -> FrequencyBand:
    """Band for a cumulative lemma count; requires count >= 1.

    A displayed word is always part of the history, so a count below one
    means the caller's index is broken.
    """
    if count < 1:
        raise NotInHistory(f"count must be >= 1, got {count}")
    if count <= thresholds.red_max:
        return FrequencyBand.RED
    if count <= thresholds.green_max:
        return FrequencyBand.GREEN
    if count <= thresholds.blue_max:
        return FrequencyBand.BLUE
    return FrequencyBand.BLACK


def _scan_text(
    text: AnnotatedText,
    counts: dict[str, int],
    occurrences: dict[str, list[Occurrence]],
) -> None:
    for segment in text.segments:
        for token_index, token in enumerate(segment.tokens):
            if token.kind is not TokenKind.WORD:
                continue
            counts[token.lemma] = counts.get(token.lemma, 0) + 1
            occurrences.setdefault(token.lemma, []).append(
                Occurrence(text.text_id, segment.index, token_index)
            )


def build_index(history: ReadingHistory, texts: dict[str, AnnotatedText]) -> LemmaIndex:
    """Count every word token's lemma across the history, in reading order."""
    counts: dict[str, int] = {}
    occurrences: dict[str, list[Occurrence]] = {}
    for text_id in history.entries:
        text = texts.get(text_id)
        if text is None:
            raise HistoryMiss(f"history entry {text_id!r} has no loaded text")
        _scan_text(text, counts, occurrences)
    return LemmaIndex(counts=counts, occurrences={k: tuple(v) for k, v in occurrences.items()})


def extend_index(
    index: LemmaIndex, history: ReadingHistory, new_text: AnnotatedText
) -> tuple[LemmaIndex, ReadingHistory]:
    """Append one newly read text; equivalent to a full rebuild, inputs unchanged."""
    if new_text.text_id in history.entries:
        raise DuplicateText(f"text {new_text.text_id!r} is already in the history")
    counts = dict(index.counts)
    occurrences = {k: list(v) for k, v in index.occurrences.items()}
    _scan_text(new_text, counts, occurrences)
    extended = ReadingHistory(entries=history.entries + (new_text.text_id,))
    return (
        LemmaIndex(counts=counts, occurrences={k: tuple(v) for k, v in occurrences.items()}),
        extended,
    )


def read_history_file(path: Path) -> ReadingHistory:
    """Read the history file: one text id per line, earliest first.

    A missing file is an empty history. The format deliberately has no
    user-identifying fields.
    """
    if not path.exists():
        return ReadingHistory()
    lines = path.read_text(encoding="utf-8").splitlines()
    return ReadingHistory(entries=tuple(line.strip() for line in lines if line.strip()))


def write_history_file(path: Path, history: ReadingHistory) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = "".join(f"{entry}\n" for entry in history.entries)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(body, encoding="utf-8")
    os.replace(tmp, path)
