"""Span-based document model.

All offsets are Unicode code point positions into the original document text.
Annotations never index a normalized or lowercased copy, so any consumer can
recover the exact surface string with ``text[span.begin:span.end]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any


class Assertion(Enum):
    """Polarity of a concept mention."""

    AFFIRMED = "Affirmed"
    NEGATED = "Negated"


class AnnotationSource(Enum):
    """Which stage produced an assertion decision."""

    DEFAULT = "Default"
    NEGEX_PRE = "NegexPre"
    NEGEX_POST = "NegexPost"
    DEP_PATTERN_NEG = "DepPatternNeg"
    DEP_PATTERN_POS_CORRECTION = "DepPatternPosCorrection"


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character interval [begin, end) into the document text."""

    begin: int
    end: int

    def __post_init__(self) -> None:
        if self.begin < 0 or self.end < self.begin:
            raise ValueError(f"invalid span ({self.begin}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.begin

    def slice(self, text: str) -> str:
        return text[self.begin:self.end]

    def contains(self, other: Span) -> bool:
        return self.begin <= other.begin and other.end <= self.end


def span_overlaps(a: Span, b: Span) -> bool:
    """Standard half-open interval test: a.begin < b.end and b.begin < a.end."""
    return a.begin < b.end and b.begin < a.end


@dataclass(frozen=True)
class Token:
    span: Span
    text: str
    lowercased: str
    is_stopword: bool = False
    # Possibly singleton decomposition of a compound; original-case substrings.
    compound_parts: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.text) != len(self.span):
            raise ValueError("token text length does not match its span")


def make_token(text: str, begin: int) -> Token:
    return Token(span=Span(begin, begin + len(text)), text=text, lowercased=text.lower())


@dataclass(frozen=True)
class Sentence:
    span: Span
    tokens: tuple[Token, ...] = ()

    def __post_init__(self) -> None:
        for tok in self.tokens:
            if not self.span.contains(tok.span):
                raise ValueError("token outside sentence span")


@dataclass(frozen=True)
class ConceptAnnotation:
    """A dictionary hit: a mention of a known concept at a span."""

    span: Span
    category: str
    matched_text: str
    # Normalized dictionary phrase the mention was matched under.
    dictionary_entry: str


@dataclass(frozen=True)
class NegationAnnotation:
    """Assertion decision for one concept occurrence, with provenance."""

    concept: ConceptAnnotation
    assertion: Assertion
    source: AnnotationSource
    trigger_span: Span | None = None
    trigger_text: str | None = None
    # Identifier of the trigger that fired, for frequency reports ("PRE:kein...").
    trigger_id: str | None = None

    def __post_init__(self) -> None:
        if self.assertion is Assertion.NEGATED:
            if self.source is AnnotationSource.DEFAULT or self.trigger_span is None:
                raise ValueError("a negated concept must carry a trigger and a non-default source")


@dataclass(frozen=True)
class Document:
    text: str
    sentences: tuple[Sentence, ...]
    annotations: tuple[NegationAnnotation, ...] = ()


def _span_json(span: Span) -> dict[str, int]:
    return {"begin": span.begin, "end": span.end}


def document_to_json(doc: Document) -> dict[str, Any]:
    """Serialize a document to the wire shape used by the CLI and the server."""
    concepts = []
    for ann in doc.annotations:
        trigger = None
        if ann.trigger_span is not None:
            trigger = {"text": ann.trigger_text, "span": _span_json(ann.trigger_span)}
        concepts.append(
            {
                "span": _span_json(ann.concept.span),
                "category": ann.concept.category,
                "assertion": ann.assertion.value,
                "source": ann.source.value,
                "trigger": trigger,
            }
        )
    return {
        "text": doc.text,
        "sentences": [
            {
                "span": _span_json(s.span),
                "tokens": [
                    {"span": _span_json(t.span), "text": t.text, "is_stopword": t.is_stopword}
                    for t in s.tokens
                ],
            }
            for s in doc.sentences
        ],
        "concepts": concepts,
    }


def with_tokens(sentence: Sentence, tokens: tuple[Token, ...]) -> Sentence:
    return replace(sentence, tokens=tokens)
