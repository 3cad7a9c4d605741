"""Trigger-driven negation detection with token scope windows.

Triggers are regular expressions over the lowercased, single-space-joined
token sequence of one sentence, and come in four types:

- PRE   negates concepts to its right,
- POST  negates concepts to its left,
- PSEU  pseudo-negation; suppresses a PRE trigger starting at the same token,
- CONJ  conjunction; only terminates scopes.

A PRE match negates every concept whose first token lies after the match and
within `window` tokens of its end, stopping before the start of the next
trigger match of any type. A POST match mirrors this to the left: a concept is
negated when its last token lies within `window` tokens before the match
start, and no other trigger match ends in between.

A POST match that starts at the same token as a PRE match is shadowed: by
default only the PRE trigger acts there (the PRE pattern wins the token). With
the interference fix enabled (the default), a shadowing PRE whose scope covers
no concept is dropped and the shadowed POST activated instead, so that
"<concept> nicht nachweisbar" is negated by the POST trigger even though the
bare PRE "nicht" also matches.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ResourceFormatError
from .preprocess import iter_resource_lines
from .textmodel import (
    AnnotationSource,
    Assertion,
    ConceptAnnotation,
    NegationAnnotation,
    Sentence,
    Span,
    span_overlaps,
)

MIN_WINDOW = 1
MAX_WINDOW = 100


class TriggerType(Enum):
    PRE = "PRE"
    POST = "POST"
    PSEU = "PSEU"
    CONJ = "CONJ"


@dataclass(frozen=True)
class Trigger:
    pattern: str
    type: TriggerType

    def __post_init__(self) -> None:
        object.__setattr__(self, "_regex", re.compile(self.pattern, re.IGNORECASE))

    @property
    def regex(self) -> re.Pattern[str]:
        return self._regex  # type: ignore[attr-defined]

    @property
    def id(self) -> str:
        return f"{self.type.value}:{self.pattern}"


@dataclass(frozen=True)
class TriggerSet:
    name: str
    triggers: tuple[Trigger, ...]

    def counts_by_type(self) -> dict[TriggerType, int]:
        counts = {t: 0 for t in TriggerType}
        for trigger in self.triggers:
            counts[trigger.type] += 1
        return counts


def parse_trigger_file(content: str, name: str = "triggers") -> TriggerSet:
    """Parse ``regex<TAB>TYPE`` lines into a TriggerSet.

    Raises ResourceFormatError naming the line for an unknown type, a bad
    regex, a malformed row, or a duplicate (pattern, type) entry.
    """
    triggers: list[Trigger] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in iter_resource_lines(content):
        columns = line.split("\t")
        if len(columns) != 2 or not columns[0].strip() or not columns[1].strip():
            raise ResourceFormatError(
                f"expected 'regex<TAB>TYPE' at line {lineno}", line=lineno
            )
        pattern, tag = columns[0].strip(), columns[1].strip()
        try:
            trigger_type = TriggerType(tag)
        except ValueError:
            raise ResourceFormatError(
                f"unknown trigger type {tag} at line {lineno}", line=lineno
            ) from None
        try:
            re.compile(pattern)
        except re.error as exc:
            raise ResourceFormatError(
                f"invalid trigger regex at line {lineno}: {exc}", line=lineno
            ) from exc
        key = (pattern, tag)
        if key in seen:
            raise ResourceFormatError(
                f"duplicate trigger {pattern!r} ({tag}) at line {lineno}", line=lineno
            )
        seen.add(key)
        triggers.append(Trigger(pattern=pattern, type=trigger_type))
    return TriggerSet(name=name, triggers=tuple(triggers))


@dataclass(frozen=True)
class TriggerMatch:
    trigger: Trigger
    span: Span
    first_token: int
    last_token: int

    def token_overlaps(self, other: "TriggerMatch") -> bool:
        return self.first_token <= other.last_token and other.first_token <= self.last_token


@dataclass(frozen=True)
class NegexConfig:
    """window=None means unlimited scope; otherwise 1..100 tokens."""

    window: int | None = None
    interference_fix: bool = True

    def __post_init__(self) -> None:
        if self.window is not None and not (MIN_WINDOW <= self.window <= MAX_WINDOW):
            raise ValueError(f"window must be None or in [{MIN_WINDOW}, {MAX_WINDOW}]")


def find_trigger_matches(sentence: Sentence, trigger_set: TriggerSet) -> list[TriggerMatch]:
    """All surviving token-aligned trigger matches in the sentence.

    Matching runs against the lowercased tokens joined by single spaces; a
    match must cover whole tokens. Per trigger only maximal matches are kept
    (none contained in another match of the same trigger). Overlapping matches
    of the same type are resolved longest-first (ties: leftmost, then trigger
    file order). Finally a PRE match starting at the same token as a PSEU
    match is removed.
    """
    tokens = sentence.tokens
    if not tokens:
        return []
    order = {trigger: i for i, trigger in enumerate(trigger_set.triggers)}
    starts: list[int] = []
    position = 0
    for token in tokens:
        starts.append(position)
        position += len(token.lowercased) + 1
    joined = " ".join(t.lowercased for t in tokens)
    ends = [starts[i] + len(tokens[i].lowercased) for i in range(len(tokens))]

    raw: list[TriggerMatch] = []
    for trigger in trigger_set.triggers:
        per_trigger: list[tuple[int, int]] = []
        for i in range(len(tokens)):
            for j in range(len(tokens) - 1, i - 1, -1):
                if trigger.regex.fullmatch(joined, starts[i], ends[j]):
                    per_trigger.append((i, j))
                    break
        for i, j in per_trigger:
            if any(a <= i and j <= b and (a, b) != (i, j) for a, b in per_trigger):
                continue
            raw.append(
                TriggerMatch(
                    trigger=trigger,
                    span=Span(tokens[i].span.begin, tokens[j].span.end),
                    first_token=i,
                    last_token=j,
                )
            )

    kept: list[TriggerMatch] = []
    for trigger_type in TriggerType:
        candidates = [m for m in raw if m.trigger.type is trigger_type]
        candidates.sort(
            key=lambda m: (-(m.last_token - m.first_token), m.first_token, order[m.trigger])
        )
        accepted: list[TriggerMatch] = []
        for match in candidates:
            if not any(match.token_overlaps(other) for other in accepted):
                accepted.append(match)
        kept.extend(accepted)

    pseudo_starts = {m.first_token for m in kept if m.trigger.type is TriggerType.PSEU}
    kept = [
        m
        for m in kept
        if not (m.trigger.type is TriggerType.PRE and m.first_token in pseudo_starts)
    ]
    kept.sort(key=lambda m: (m.first_token, m.last_token, order[m.trigger]))
    return kept


def _pre_scope(
    match: TriggerMatch,
    terminators: Iterable[TriggerMatch],
    token_count: int,
    window: int | None,
) -> tuple[int, int]:
    low = match.last_token + 1
    high = token_count - 1
    if window is not None:
        high = min(high, match.last_token + window)
    later_starts = [t.first_token for t in terminators if t.first_token > match.last_token]
    if later_starts:
        high = min(high, min(later_starts) - 1)
    return low, high


def _post_scope(
    match: TriggerMatch,
    terminators: Iterable[TriggerMatch],
    window: int | None,
) -> tuple[int, int]:
    high = match.first_token - 1
    low = 0
    if window is not None:
        low = max(low, match.first_token - window)
    earlier_ends = [t.last_token for t in terminators if t.last_token < match.first_token]
    if earlier_ends:
        low = max(low, max(earlier_ends) + 1)
    return low, high


def _concept_token_range(
    concept: ConceptAnnotation, tokens: Sequence, sentence: Sentence
) -> tuple[int, int]:
    indices = [i for i, t in enumerate(tokens) if span_overlaps(t.span, concept.span)]
    if not indices:
        raise ValueError(
            f"concept span ({concept.span.begin}, {concept.span.end}) covers no token "
            f"of sentence ({sentence.span.begin}, {sentence.span.end})"
        )
    return min(indices), max(indices)


def apply_negex(
    sentence: Sentence,
    concepts: Sequence[ConceptAnnotation],
    trigger_set: TriggerSet,
    config: NegexConfig,
    text: str | None = None,
) -> list[NegationAnnotation]:
    """Assertion decision for every concept of one sentence, in input order."""
    tokens = sentence.tokens
    matches = find_trigger_matches(sentence, trigger_set)
    order = {trigger: i for i, trigger in enumerate(trigger_set.triggers)}

    pre = [m for m in matches if m.trigger.type is TriggerType.PRE]
    post = [m for m in matches if m.trigger.type is TriggerType.POST]
    passive = [m for m in matches if m.trigger.type in (TriggerType.PSEU, TriggerType.CONJ)]

    shadow_pairs: list[tuple[TriggerMatch, TriggerMatch]] = []
    shadowed: set[int] = set()
    for p in pre:
        covering = [
            q
            for q in post
            if q.first_token == p.first_token and q.last_token >= p.last_token
        ]
        if covering:
            q = max(covering, key=lambda m: m.last_token)
            shadow_pairs.append((p, q))
            shadowed.add(id(q))
    active = pre + [q for q in post if id(q) not in shadowed]

    concept_ranges = [_concept_token_range(c, tokens, sentence) for c in concepts]
    concept_firsts = {first for first, _ in concept_ranges}

    if config.interference_fix:
        for p, q in sorted(shadow_pairs, key=lambda pair: pair[0].first_token):
            terminators = [m for m in active if m is not p] + passive
            low, high = _pre_scope(p, terminators, len(tokens), config.window)
            if not any(low <= first <= high for first in concept_firsts):
                active = [m for m in active if m is not p] + [q]

    annotations: list[NegationAnnotation] = []
    for concept, (first, last) in zip(concepts, concept_ranges):
        hits: list[tuple[int, int, int, int, TriggerMatch]] = []
        for m in active:
            terminators = [x for x in active if x is not m] + passive
            if m.trigger.type is TriggerType.PRE:
                low, high = _pre_scope(m, terminators, len(tokens), config.window)
                if low <= first <= high:
                    hits.append((first - m.last_token, 0, m.first_token, order[m.trigger], m))
            else:
                low, high = _post_scope(m, terminators, config.window)
                if low <= last <= high:
                    hits.append((m.first_token - last, 1, m.first_token, order[m.trigger], m))
        if not hits:
            annotations.append(
                NegationAnnotation(
                    concept=concept,
                    assertion=Assertion.AFFIRMED,
                    source=AnnotationSource.DEFAULT,
                )
            )
            continue
        _, kind, _, _, winner = min(hits)
        source = AnnotationSource.NEGEX_PRE if kind == 0 else AnnotationSource.NEGEX_POST
        trigger_text = (
            winner.span.slice(text)
            if text is not None
            else " ".join(t.text for t in tokens[winner.first_token : winner.last_token + 1])
        )
        annotations.append(
            NegationAnnotation(
                concept=concept,
                assertion=Assertion.NEGATED,
                source=source,
                trigger_span=winner.span,
                trigger_text=trigger_text,
                trigger_id=winner.trigger.id,
            )
        )
    return annotations


def classify_document(
    sentences: Sequence[Sentence],
    concepts: Sequence[ConceptAnnotation],
    trigger_set: TriggerSet,
    config: NegexConfig,
    text: str | None = None,
) -> list[NegationAnnotation]:
    """Run apply_negex per sentence; concepts are assigned to the first
    sentence whose span overlaps theirs. Output keeps the input concept order.
    """
    per_sentence: dict[int, list[ConceptAnnotation]] = {}
    slot: list[int | None] = []
    for concept in concepts:
        index = next(
            (i for i, s in enumerate(sentences) if span_overlaps(s.span, concept.span)), None
        )
        if index is None:
            raise ValueError(
                f"concept span ({concept.span.begin}, {concept.span.end}) "
                "lies outside every sentence"
            )
        per_sentence.setdefault(index, []).append(concept)
        slot.append(index)
    results: dict[tuple[int, int], NegationAnnotation] = {}
    for index, group in per_sentence.items():
        for annotation in apply_negex(sentences[index], group, trigger_set, config, text):
            results[(annotation.concept.span.begin, annotation.concept.span.end)] = annotation
    return [results[(c.span.begin, c.span.end)] for c in concepts]
