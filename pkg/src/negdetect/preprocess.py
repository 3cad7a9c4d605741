"""Sentence segmentation, tokenization and dictionary concept annotation.

Resource files are UTF-8, one entry per line; blank lines and lines starting
with ``#`` are ignored. All matching is case-insensitive via lowercasing, but
every produced span points into the original text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping

from .errors import ResourceFormatError
from .textmodel import ConceptAnnotation, Sentence, Span, Token, make_token

DEFAULT_SENTENCE_SPLIT_PATTERNS = (r"[.!?]+(?=\s|$)", r"\n[ \t]*\n")
DEFAULT_TOKEN_SPLIT_PATTERNS = (r"[.,](?!\d)", r"[;:!?()\[\]{}\"'„“‚‘«»/+=*#§%&]")
DEFAULT_LINKING_MORPHEMES = ("s", "es", "n", "en", "e", "er", "nen")


def iter_resource_lines(content: str) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, stripped line) for every data line."""
    for lineno, raw in enumerate(content.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _compile(pattern: str, what: str, line: int | None = None) -> re.Pattern[str]:
    try:
        return re.compile(pattern)
    except re.error as exc:
        raise ResourceFormatError(f"invalid {what} pattern {pattern!r}: {exc}", line=line) from exc


@dataclass(frozen=True)
class SegmenterConfig:
    """Regex-driven segmentation rules.

    Sentence boundaries are placed after each match of a sentence split
    pattern; tokens are split out of whitespace-separated chunks by the token
    split patterns. A chunk equal to a known abbreviation is never split and
    never ends a sentence.
    """

    sentence_split_patterns: tuple[str, ...] = DEFAULT_SENTENCE_SPLIT_PATTERNS
    token_split_patterns: tuple[str, ...] = DEFAULT_TOKEN_SPLIT_PATTERNS
    abbreviations: frozenset[str] = frozenset()
    _sentence_res: tuple[re.Pattern[str], ...] = field(init=False, repr=False, compare=False)
    _token_res: tuple[re.Pattern[str], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "_sentence_res",
            tuple(_compile(p, "sentence split") for p in self.sentence_split_patterns),
        )
        object.__setattr__(
            self,
            "_token_res",
            tuple(_compile(p, "token split") for p in self.token_split_patterns),
        )


def parse_segmenter_config(content: str, abbreviations: Iterable[str] = ()) -> SegmenterConfig:
    """Parse ``key = value`` lines; keys are sentence_split or token_split."""
    sentence: list[str] = []
    token: list[str] = []
    for lineno, line in iter_resource_lines(content):
        if "=" not in line:
            raise ResourceFormatError(f"expected 'key = pattern' at line {lineno}", line=lineno)
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if not value:
            raise ResourceFormatError(f"empty pattern at line {lineno}", line=lineno)
        _compile(value, key or "split", lineno)
        if key == "sentence_split":
            sentence.append(value)
        elif key == "token_split":
            token.append(value)
        else:
            raise ResourceFormatError(f"unknown segmenter key {key!r} at line {lineno}", line=lineno)
    return SegmenterConfig(
        sentence_split_patterns=tuple(sentence) or DEFAULT_SENTENCE_SPLIT_PATTERNS,
        token_split_patterns=tuple(token) or DEFAULT_TOKEN_SPLIT_PATTERNS,
        abbreviations=frozenset(a.lower() for a in abbreviations),
    )


def parse_abbreviations(content: str) -> frozenset[str]:
    return frozenset(line.lower() for _, line in iter_resource_lines(content))


def _protected_by_abbreviation(text: str, end: int, config: SegmenterConfig) -> bool:
    # The non-whitespace run ending at `end` is checked against the
    # abbreviation list; "V.a." must not terminate a sentence.
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    chunk = text[start:end].lower()
    return chunk in config.abbreviations


def segment_sentences(text: str, config: SegmenterConfig) -> list[Sentence]:
    """Split text into sentences; spans exclude leading/trailing whitespace."""
    breaks = {len(text)}
    for rx in config._sentence_res:
        for m in rx.finditer(text):
            if m.end() == m.start():
                continue
            if _protected_by_abbreviation(text, m.end(), config):
                continue
            breaks.add(m.end())
    sentences: list[Sentence] = []
    start = 0
    for cut in sorted(breaks):
        segment = text[start:cut]
        lead = len(segment) - len(segment.lstrip())
        trail = len(segment) - len(segment.rstrip())
        if segment.strip():
            sentences.append(Sentence(span=Span(start + lead, cut - trail)))
        start = cut
    return sentences


def tokenize(text: str, config: SegmenterConfig, base: int = 0) -> list[Token]:
    """Tokenize a sentence string; spans are offset by `base` into the document."""
    tokens: list[Token] = []
    for chunk_match in re.finditer(r"\S+", text):
        chunk = chunk_match.group()
        chunk_base = base + chunk_match.start()
        if chunk.lower() in config.abbreviations:
            tokens.append(make_token(chunk, chunk_base))
            continue
        taken: list[tuple[int, int]] = []
        for rx in config._token_res:
            for m in rx.finditer(chunk):
                if m.end() == m.start():
                    continue
                interval = (m.start(), m.end())
                if any(a < interval[1] and interval[0] < b for a, b in taken):
                    continue
                taken.append(interval)
        taken.sort()
        pos = 0
        for a, b in taken:
            if a > pos:
                tokens.append(make_token(chunk[pos:a], chunk_base + pos))
            tokens.append(make_token(chunk[a:b], chunk_base + a))
            pos = b
        if pos < len(chunk):
            tokens.append(make_token(chunk[pos:], chunk_base + pos))
    return tokens


@dataclass(frozen=True)
class StopwordList:
    entries: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries


def parse_stopwords(content: str) -> StopwordList:
    entries = frozenset(line.lower() for _, line in iter_resource_lines(content))
    return StopwordList(entries=entries)


def mark_stopwords(tokens: Iterable[Token], stopwords: StopwordList) -> list[Token]:
    return [replace(t, is_stopword=t.lowercased in stopwords.entries) for t in tokens]


@dataclass(frozen=True)
class CompoundLexicon:
    """Known compound constituents plus the linking morphemes allowed between them."""

    entries: frozenset[str]
    linking_morphemes: tuple[str, ...] = DEFAULT_LINKING_MORPHEMES


def parse_compound_lexicon(content: str) -> CompoundLexicon:
    entries = set()
    for lineno, line in iter_resource_lines(content):
        entry = line.lower()
        if len(entry) < 3:
            raise ResourceFormatError(
                f"compound lexicon entry {entry!r} shorter than 3 characters at line {lineno}",
                line=lineno,
            )
        entries.add(entry)
    return CompoundLexicon(entries=frozenset(entries))


def split_compound(word: str, lexicon: CompoundLexicon) -> list[str]:
    """Decompose a German compound into known constituents.

    A decomposition covers the whole lowercased word with lexicon entries,
    each optionally followed by a linking morpheme (the morpheme is folded
    into the preceding part, so "Nierenfunktion" -> ["Nieren", "funktion"]).
    Preference: fewest parts, then the longest final part, moving leftwards.
    Returns [word] when no decomposition with at least two parts exists.
    """
    lower = word.lower()
    decompositions: list[list[tuple[int, int]]] = []

    def extend(pos: int, bounds: list[tuple[int, int]]) -> None:
        if pos == len(lower):
            if len(bounds) >= 2:
                decompositions.append(bounds)
            return
        for entry in lexicon.entries:
            if not lower.startswith(entry, pos):
                continue
            end = pos + len(entry)
            extend(end, bounds + [(pos, end)])
            if end < len(lower):
                for morpheme in lexicon.linking_morphemes:
                    if lower.startswith(morpheme, end) and end + len(morpheme) < len(lower):
                        extend(end + len(morpheme), bounds + [(pos, end + len(morpheme))])

    extend(0, [])
    if not decompositions:
        return [word]
    decompositions.sort(
        key=lambda bs: (len(bs), tuple(-(e - s) for s, e in reversed(bs)))
    )
    return [word[s:e] for s, e in decompositions[0]]


def attach_compound_parts(tokens: Iterable[Token], lexicon: CompoundLexicon) -> list[Token]:
    return [replace(t, compound_parts=tuple(split_compound(t.text, lexicon))) for t in tokens]


def _normalize_phrase(phrase: str) -> str:
    return " ".join(phrase.lower().split())


@dataclass(frozen=True)
class ConceptDictionary:
    """Lowercased phrase -> category map for dictionary annotation."""

    entries: Mapping[str, str]
    max_phrase_tokens: int

    @classmethod
    def from_entries(cls, pairs: Iterable[tuple[str, str]]) -> "ConceptDictionary":
        entries: dict[str, str] = {}
        longest = 1
        for phrase, category in pairs:
            normalized = _normalize_phrase(phrase)
            if not normalized:
                raise ValueError("empty concept phrase")
            entries[normalized] = category
            longest = max(longest, len(normalized.split()))
        return cls(entries=entries, max_phrase_tokens=longest)


DEFAULT_CATEGORY = "med_concept"


def parse_concepts(content: str) -> ConceptDictionary:
    """Parse ``phrase<TAB>category`` lines; the category column is optional."""
    pairs: list[tuple[str, str]] = []
    for lineno, line in iter_resource_lines(content):
        columns = line.split("\t")
        phrase = columns[0].strip()
        if not phrase:
            raise ResourceFormatError(f"empty concept phrase at line {lineno}", line=lineno)
        category = columns[1].strip() if len(columns) > 1 and columns[1].strip() else DEFAULT_CATEGORY
        pairs.append((phrase, category))
    return ConceptDictionary.from_entries(pairs)


def annotate_concepts(
    sentence: Sentence,
    dictionary: ConceptDictionary,
    lexicon: CompoundLexicon,
    text: str,
) -> list[ConceptAnnotation]:
    """Greedy longest-match dictionary annotation over the sentence tokens.

    At each token the longest matching lowercased n-gram wins and scanning
    resumes after it. A token with no n-gram match falls back to its compound
    parts; a part hit annotates the full token span under the part's entry.
    """
    tokens = sentence.tokens
    annotations: list[ConceptAnnotation] = []
    i = 0
    while i < len(tokens):
        matched = False
        for n in range(min(dictionary.max_phrase_tokens, len(tokens) - i), 0, -1):
            phrase = " ".join(t.lowercased for t in tokens[i : i + n])
            category = dictionary.entries.get(phrase)
            if category is not None:
                span = Span(tokens[i].span.begin, tokens[i + n - 1].span.end)
                annotations.append(
                    ConceptAnnotation(
                        span=span,
                        category=category,
                        matched_text=span.slice(text),
                        dictionary_entry=phrase,
                    )
                )
                i += n
                matched = True
                break
        if matched:
            continue
        token = tokens[i]
        parts = token.compound_parts or tuple(split_compound(token.text, lexicon))
        if len(parts) > 1:
            for part in parts:
                category = dictionary.entries.get(part.lower())
                if category is not None:
                    annotations.append(
                        ConceptAnnotation(
                            span=token.span,
                            category=category,
                            matched_text=token.text,
                            dictionary_entry=part.lower(),
                        )
                    )
                    break
        i += 1
    return annotations
