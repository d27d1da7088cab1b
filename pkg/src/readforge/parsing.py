"""Parser for the readforge annotated text format and the lexicon format.

Text source format (``.lara.txt``): ``||`` ends a segment; a final
unterminated segment is implicitly closed. ``surface#lemma#`` written
immediately after a word (no intervening whitespace) overrides that word's
lemma. ``\\#`` and ``\\|`` escape a literal hash or pipe. Whitespace-only
segments are dropped with a warning.

Lexicon format (``.lex.tsv``): one ``surface<TAB>lemma`` entry per line,
``#``-prefixed comment lines, later duplicate keys win.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .corpus import AnnotatedText, Segment, Token, TokenKind, normalize_lemma
from .errors import EmptyText

SEGMENT_DELIMITER = "||"

# Apostrophes and hyphens join a word only with a letter on both sides.
_JOINERS = frozenset({"'", "’", "-"})


class Severity(enum.Enum):
    WARNING = "warning"
    ERROR = "error"


@dataclass(frozen=True, slots=True)
class ParseDiagnostic:
    """A problem found while parsing, located by 1-based line and column."""

    line: int
    column: int
    severity: Severity
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity.value}: {self.message}"


@dataclass(frozen=True, slots=True)
class Lexicon:
    """Map from case-folded surface forms to lemmas."""

    entries: dict[str, str]

    def lookup(self, surface: str) -> str | None:
        return self.entries.get(normalize_lemma(surface))


EMPTY_LEXICON = Lexicon(entries={})


def _is_word_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdigit()


def tokenize_segment(raw: str) -> list[Token]:
    """Split raw segment text into tokens; word lemmas are left unassigned.

    Word tokens are maximal runs of Unicode letters and digits, plus
    apostrophes/hyphens that have a letter on both sides. Every other
    non-whitespace character becomes a single-character punctuation token.
    Char spans always splice back to ``raw``.
    """
    tokens: list[Token] = []
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch.isspace():
            i += 1
            continue
        if _is_word_char(ch):
            j = i + 1
            while j < n:
                c = raw[j]
                if _is_word_char(c):
                    j += 1
                elif (
                    c in _JOINERS
                    and raw[j - 1].isalpha()
                    and j + 1 < n
                    and raw[j + 1].isalpha()
                ):
                    j += 1
                else:
                    break
            tokens.append(
                Token(surface=raw[i:j], lemma="", kind=TokenKind.WORD, char_span=(i, j))
            )
            i = j
        else:
            tokens.append(
                Token(surface=ch, lemma="", kind=TokenKind.PUNCTUATION, char_span=(i, i + 1))
            )
            i += 1
    return tokens


@dataclass(slots=True)
class _Fragment:
    """One segment's worth of source: display text plus lemma annotations."""

    raw: str
    # (offset into raw just after the annotated word, lemma text, line, column)
    annotations: list[tuple[int, str, int, int]]
    line: int
    column: int


class _Scanner:
    """Single pass over the source tracking 1-based line/column positions."""

    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.column = 1

    def peek(self, ahead: int = 0) -> str | None:
        index = self.pos + ahead
        return self.source[index] if index < len(self.source) else None

    def advance(self) -> str:
        ch = self.source[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def at_end(self) -> bool:
        return self.pos >= len(self.source)


def _split_fragments(
    source: str, diagnostics: list[ParseDiagnostic]
) -> list[_Fragment]:
    scanner = _Scanner(source)
    fragments: list[_Fragment] = []
    raw_chars: list[str] = []
    annotations: list[tuple[int, str, int, int]] = []
    frag_line, frag_column = scanner.line, scanner.column

    def close_fragment() -> None:
        nonlocal raw_chars, annotations, frag_line, frag_column
        fragments.append(
            _Fragment("".join(raw_chars), annotations, frag_line, frag_column)
        )
        raw_chars = []
        annotations = []
        frag_line, frag_column = scanner.line, scanner.column

    while not scanner.at_end():
        ch = scanner.peek()
        if ch == "\\" and scanner.peek(1) in ("#", "|"):
            scanner.advance()
            raw_chars.append(scanner.advance())
        elif ch == "|" and scanner.peek(1) == "|":
            scanner.advance()
            scanner.advance()
            close_fragment()
        elif ch == "#":
            hash_line, hash_column = scanner.line, scanner.column
            scanner.advance()
            lemma_chars: list[str] = []
            closed = False
            while not scanner.at_end():
                c = scanner.peek()
                if c == "\\" and scanner.peek(1) in ("#", "|"):
                    scanner.advance()
                    lemma_chars.append(scanner.advance())
                elif c == "#":
                    scanner.advance()
                    closed = True
                    break
                elif c == "|" and scanner.peek(1) == "|":
                    break  # segment delimiter terminates a runaway annotation
                else:
                    lemma_chars.append(scanner.advance())
            if closed:
                annotations.append(
                    (len(raw_chars), "".join(lemma_chars), hash_line, hash_column)
                )
            else:
                diagnostics.append(
                    ParseDiagnostic(
                        hash_line,
                        hash_column,
                        Severity.ERROR,
                        "MalformedOverride: unterminated '#' annotation; "
                        "treating as literal text",
                    )
                )
                raw_chars.append("#")
                raw_chars.extend(lemma_chars)
        else:
            raw_chars.append(scanner.advance())

    # Trailing whitespace after the last "||" is the end of the file, not a
    # segment; anything with content is an implicitly closed final segment.
    if "".join(raw_chars).strip() or annotations:
        close_fragment()
    return fragments


def _build_segment(
    fragment: _Fragment,
    kept_index: int,
    text_id: str,
    lexicon: Lexicon,
    diagnostics: list[ParseDiagnostic],
) -> Segment:
    stripped = fragment.raw.strip()
    leading_ws = len(fragment.raw) - len(fragment.raw.lstrip())

    bare = tokenize_segment(stripped)
    word_index_by_end = {
        token.char_span[1]: i for i, token in enumerate(bare) if token.kind is TokenKind.WORD
    }

    overrides: dict[int, str] = {}
    for raw_offset, lemma_text, line, column in fragment.annotations:
        token_index = word_index_by_end.get(raw_offset - leading_ws)
        if token_index is None or not lemma_text:
            reason = "empty lemma" if token_index is not None else "does not immediately follow a word"
            diagnostics.append(
                ParseDiagnostic(
                    line,
                    column,
                    Severity.ERROR,
                    f"MalformedOverride: '#...#' annotation {reason}; "
                    "falling back to the default lemma",
                )
            )
            continue
        overrides[token_index] = normalize_lemma(lemma_text)

    tokens: list[Token] = []
    for i, token in enumerate(bare):
        if token.kind is not TokenKind.WORD:
            tokens.append(token)
            continue
        lemma = overrides.get(i)
        if lemma is None:
            lemma = lexicon.lookup(token.surface)
        if lemma is None:
            lemma = normalize_lemma(token.surface)
        tokens.append(
            Token(surface=token.surface, lemma=lemma, kind=token.kind, char_span=token.char_span)
        )

    return Segment(
        index=kept_index,
        raw_text=stripped,
        tokens=tuple(tokens),
        audio_resource_id=f"{text_id}_seg_{kept_index:04d}",
    )


def parse_text(
    source: str,
    text_id: str,
    title: str,
    language: str,
    lexicon: Lexicon | None = None,
) -> tuple[AnnotatedText, list[ParseDiagnostic]]:
    """Parse annotated source into an AnnotatedText plus diagnostics.

    Lemma precedence per word: inline override, then lexicon lookup of the
    case-folded surface, then the case-folded surface itself. Each kept
    segment gets ``audio_resource_id = f"{text_id}_seg_{index:04d}"``.

    Raises EmptyText when no segments survive (diagnostics never abort
    otherwise).
    """
    lexicon = lexicon or EMPTY_LEXICON
    diagnostics: list[ParseDiagnostic] = []
    segments: list[Segment] = []

    for fragment in _split_fragments(source, diagnostics):
        if not fragment.raw.strip():
            diagnostics.append(
                ParseDiagnostic(
                    fragment.line,
                    fragment.column,
                    Severity.WARNING,
                    "empty segment dropped",
                )
            )
            continue
        segments.append(
            _build_segment(fragment, len(segments), text_id, lexicon, diagnostics)
        )

    if not segments:
        raise EmptyText(f"text {text_id!r} has no segments after parsing")

    text = AnnotatedText(
        text_id=text_id, title=title, language=language, segments=tuple(segments)
    )
    return text, diagnostics


def load_lexicon(source: str) -> tuple[Lexicon, list[ParseDiagnostic]]:
    """Parse tab-separated lexicon source; later duplicate keys win."""
    entries: dict[str, str] = {}
    diagnostics: list[ParseDiagnostic] = []
    for line_number, line in enumerate(source.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            diagnostics.append(
                ParseDiagnostic(
                    line_number, 1, Severity.ERROR, "MalformedLine: no tab separator"
                )
            )
            continue
        surface, _, lemma = line.partition("\t")
        surface = surface.strip()
        lemma = lemma.strip()
        if not surface or not lemma:
            diagnostics.append(
                ParseDiagnostic(
                    line_number, 1, Severity.ERROR, "MalformedLine: empty surface or lemma"
                )
            )
            continue
        key = normalize_lemma(surface)
        if key in entries:
            diagnostics.append(
                ParseDiagnostic(
                    line_number,
                    1,
                    Severity.WARNING,
                    f"duplicate lexicon entry for {key!r}; later entry wins",
                )
            )
        entries[key] = normalize_lemma(lemma)
    return Lexicon(entries=entries), diagnostics
