"""Bridges between raw token/trigger tuples and the engine API, plus the
random sentence generator shared by the property tests and the acceptance
suite. Results are normalized to the oracle's output tuples so the two can
be compared directly."""

from __future__ import annotations

import random

from negdetect.negex import NegexConfig, Trigger, TriggerSet, TriggerType, apply_negex
from negdetect.textmodel import (
    AnnotationSource,
    Assertion,
    ConceptAnnotation,
    Sentence,
    Span,
    make_token,
)

KIND_BY_SOURCE = {
    AnnotationSource.NEGEX_PRE: "PRE",
    AnnotationSource.NEGEX_POST: "POST",
}


def build_sentence(tokens: list[str]) -> tuple[Sentence, str]:
    text = " ".join(tokens)
    built = []
    position = 0
    for word in tokens:
        built.append(make_token(word, position))
        position += len(word) + 1
    return Sentence(span=Span(0, len(text)), tokens=tuple(built)), text


def trigger_set_from(pairs: list[tuple[str, str]], name: str = "adhoc") -> TriggerSet:
    return TriggerSet(
        name=name,
        triggers=tuple(Trigger(pattern=p, type=TriggerType(k)) for p, k in pairs),
    )


def concepts_at(sentence: Sentence, text: str, indices: list[tuple[int, int]]):
    concepts = []
    for first, last in indices:
        span = Span(sentence.tokens[first].span.begin, sentence.tokens[last].span.end)
        concepts.append(
            ConceptAnnotation(
                span=span,
                category="med_concept",
                matched_text=span.slice(text),
                dictionary_entry=span.slice(text).lower(),
            )
        )
    return concepts


def run_negex(
    tokens: list[str],
    triggers: list[tuple[str, str]],
    concept_indices: list[tuple[int, int]],
    window: int | None,
    interference_fix: bool = True,
) -> list[tuple]:
    """Run apply_negex and normalize each result to the oracle's tuple shape:
    ("AFFIRMED", None, None, None) or ("NEGATED", kind, (first, last), id)."""
    sentence, text = build_sentence(tokens)
    starts = [t.span.begin for t in sentence.tokens]
    ends = [t.span.end for t in sentence.tokens]
    concepts = concepts_at(sentence, text, concept_indices)
    config = NegexConfig(window=window, interference_fix=interference_fix)
    results: list[tuple] = []
    for ann in apply_negex(sentence, concepts, trigger_set_from(triggers), config, text):
        if ann.assertion is Assertion.AFFIRMED:
            results.append(("AFFIRMED", None, None, None))
        else:
            first = starts.index(ann.trigger_span.begin)
            last = ends.index(ann.trigger_span.end)
            results.append(("NEGATED", KIND_BY_SOURCE[ann.source], (first, last), ann.trigger_id))
    return results


# A compact but adversarial trigger mix: a PRE that is a prefix of a POST,
# a PSEU sharing its first token with the same PRE, an optional regex group,
# the same word as both PRE and POST, and two conjunctions.
RANDOM_TRIGGERS: list[tuple[str, str]] = [
    ("kein", "PRE"),
    ("nicht", "PRE"),
    ("weder", "PRE"),
    ("verneint", "PRE"),
    ("nicht (sicher )?nachweisbar", "POST"),
    ("ausgeschlossen", "POST"),
    ("verneint", "POST"),
    ("negativ", "POST"),
    ("kein anstieg", "PSEU"),
    ("nicht sicher", "PSEU"),
    ("aber", "CONJ"),
    ("noch", "CONJ"),
]

RANDOM_UNITS = [
    "kein",
    "nicht",
    "weder",
    "verneint",
    "nachweisbar",
    "sicher",
    "ausgeschlossen",
    "negativ",
    "anstieg",
    "aber",
    "noch",
    "nicht nachweisbar",
    "nicht sicher nachweisbar",
    "nicht sicher",
    "kein anstieg",
]
RANDOM_FILLERS = ["x", "y", "z", "w", "v"]
RANDOM_CONCEPTS = ["c1", "c2", "c3"]

RANDOM_WINDOWS = [None, 1, 2, 3, 4, 5]


RANDOM_GRAPH_WORDS = ["fieber", "husten", "kein", "ohne", "anzeichen", "x", "y"]
RANDOM_GRAPH_POS = ["NN", "NE", "ADV", "PTKNEG", "VVPP"]
RANDOM_GRAPH_LABELS = ["neg", "nsubj", "nmod:von", "advmod", "det", "conj"]
RANDOM_VALUE_REGEXES = ["fieber|kein", "n.*", ".*", "neg", "nmod.*", "[nx].*", "N.*", "NN|NE"]


def random_graph(rng: random.Random):
    from negdetect.deppat import DepNode, DependencyGraph

    n = rng.randint(1, 8)
    nodes = tuple(
        DepNode(
            index=i + 1,
            word=rng.choice(RANDOM_GRAPH_WORDS),
            lemma=rng.choice(RANDOM_GRAPH_WORDS),
            pos=rng.choice(RANDOM_GRAPH_POS),
        )
        for i in range(n)
    )
    edges = []
    for _ in range(rng.randint(0, 2 * n)):
        gov, dep = rng.randint(1, n), rng.randint(1, n)
        if gov != dep:
            edges.append((gov, dep, rng.choice(RANDOM_GRAPH_LABELS)))
    return DependencyGraph(nodes=nodes, edges=tuple(edges))


def _random_value_matcher(rng: random.Random):
    from negdetect.deppat import ValueMatcher

    if rng.random() < 0.5:
        pool = RANDOM_GRAPH_WORDS + RANDOM_GRAPH_POS + RANDOM_GRAPH_LABELS
        return ValueMatcher(value=rng.choice(pool), is_regex=False)
    return ValueMatcher(value=rng.choice(RANDOM_VALUE_REGEXES), is_regex=True)


def _random_node_spec(rng: random.Random, binding: str | None):
    from negdetect.deppat import NodeSpec

    constraints = []
    for attr in ("word", "lemma", "pos"):
        if rng.random() < 0.3:
            constraints.append((attr, _random_value_matcher(rng)))
    return NodeSpec(negated=rng.random() < 0.2, constraints=tuple(constraints), binding=binding)


def random_pattern(rng: random.Random):
    """A random pattern AST with at most 3 relations and unique bindings
    (never under a negated relation, matching the parser's guarantees)."""
    from negdetect.deppat import Direction, GraphPattern, RelationOp

    pool = ["gov", "dep", "dep2", "dep3"]
    rng.shuffle(pool)
    budget = rng.randint(0, 3)

    def take_binding(under_negation: bool) -> str | None:
        if under_negation or not pool or rng.random() < 0.3:
            return None
        return pool.pop()

    def build(under_negation: bool) -> GraphPattern:
        nonlocal budget
        root = _random_node_spec(rng, take_binding(under_negation))
        constraints = []
        while budget > 0 and rng.random() < 0.55:
            budget -= 1
            negated = rng.random() < 0.25
            relation = RelationOp(
                direction=rng.choice(list(Direction)),
                label=_random_value_matcher(rng),
                negated=negated,
            )
            constraints.append((relation, build(under_negation or negated)))
        return GraphPattern(root=root, constraints=tuple(constraints))

    return build(False)


def random_negex_case(rng: random.Random):
    """One random sentence: ≤12 tokens, ≤3 trigger units, ≤3 concepts."""
    tokens: list[str] = []
    triggers_left = 3
    concepts_left = 3
    target = rng.randint(1, 12)
    while len(tokens) < target:
        roll = rng.random()
        if roll < 0.40 and triggers_left:
            tokens.extend(rng.choice(RANDOM_UNITS).split())
            triggers_left -= 1
        elif roll < 0.70 and concepts_left:
            tokens.append(rng.choice(RANDOM_CONCEPTS))
            concepts_left -= 1
        else:
            tokens.append(rng.choice(RANDOM_FILLERS))
    tokens = tokens[:12]
    concept_indices = [(i, i) for i, t in enumerate(tokens) if t in RANDOM_CONCEPTS]
    window = rng.choice(RANDOM_WINDOWS)
    interference_fix = rng.random() < 0.5
    return tokens, concept_indices, window, interference_fix
