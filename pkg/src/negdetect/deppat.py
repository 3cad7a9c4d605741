"""Dependency-graph negation patterns over CoNLL-U parses.

Pattern language (a small Semgrex-style subset), by example:

    {lemma:/frei/}=gov > /nmod:von/ {}=dep
    !{lemma:/anzeichen|hinweis/}=dep > /neg/ {}=gov
    {pos:/NN/}=dep < /.*subj.*/ ({word:/ausgeschlossen/}=gov !>> /neg/ {})

A node spec lists attribute constraints (word, lemma, pos) whose values are
either bare strings (exact match) or /regexes/ (full anchored match); `!`
before the braces negates the whole node spec, `=name` binds the matched node.
Relations are `>` (governor of), `<` (dependent of) and `>>` (governor chain);
each carries an edge-label matcher and may be negated with `!`. A negated
relation asserts that no such neighbor exists; its operand cannot bind names.
By default `>>` reaches every node whose path starts with a matching edge
label; `chain_label="any_edge"` instead requires some edge on the path to
match.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlignmentError, ConlluFormatError, PatternSyntaxError, ResourceFormatError
from .preprocess import iter_resource_lines
from .textmodel import (
    AnnotationSource,
    Assertion,
    NegationAnnotation,
    Sentence,
    Span,
    span_overlaps,
)

NODE_ATTRIBUTES = ("word", "lemma", "pos")
_BINDING_NAME = re.compile(r"gov|dep[0-9]*")


@dataclass(frozen=True)
class DepNode:
    """One syntactic token: 1-based index, lowercased word and lemma, POS tag."""

    index: int
    word: str
    lemma: str
    pos: str


@dataclass(frozen=True)
class DependencyGraph:
    nodes: tuple[DepNode, ...]
    # (governor index, dependent index, label); indices are 1-based.
    edges: tuple[tuple[int, int, str], ...]
    sentence: Sentence | None = None

    def __post_init__(self) -> None:
        for i, node in enumerate(self.nodes, 1):
            if node.index != i:
                raise ValueError(f"node {node.index} out of order (expected {i})")
        valid = range(1, len(self.nodes) + 1)
        out: dict[int, list[tuple[int, str]]] = {}
        incoming: dict[int, list[tuple[int, str]]] = {}
        for gov, dep, label in self.edges:
            if gov not in valid or dep not in valid:
                raise ValueError(f"edge ({gov}, {dep}, {label!r}) references a missing node")
            out.setdefault(gov, []).append((dep, label))
            incoming.setdefault(dep, []).append((gov, label))
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", incoming)

    def dependents(self, index: int) -> list[tuple[int, str]]:
        return self._out.get(index, [])  # type: ignore[attr-defined]

    def governors(self, index: int) -> list[tuple[int, str]]:
        return self._in.get(index, [])  # type: ignore[attr-defined]


def parse_conllu(content: str) -> list[DependencyGraph]:
    """Parse CoNLL-U text into dependency graphs.

    Comment lines and multiword/empty-node rows (ID containing '-' or '.')
    are skipped; a blank line ends a sentence. The lowercased FORM becomes the
    node word, the lowercased LEMMA the lemma ('_' falls back to the word),
    and XPOS the pos tag ('_' falls back to UPOS). HEAD=0 marks the root.
    """
    graphs: list[DependencyGraph] = []
    nodes: list[DepNode] = []
    pending: list[tuple[int, int, str, int]] = []

    def flush() -> None:
        nonlocal nodes, pending
        if not nodes:
            return
        for gov, dep, label, lineno in pending:
            if gov > len(nodes):
                raise ConlluFormatError(
                    f"HEAD {gov} references a missing token at line {lineno}", line=lineno
                )
        graphs.append(
            DependencyGraph(
                nodes=tuple(nodes), edges=tuple((g, d, l) for g, d, l, _ in pending)
            )
        )
        nodes = []
        pending = []

    for lineno, raw in enumerate(content.splitlines(), 1):
        line = raw.rstrip("\n\r")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 10:
            raise ConlluFormatError(
                f"expected 10 tab-separated columns, got {len(columns)} at line {lineno}",
                line=lineno,
            )
        token_id = columns[0]
        if "-" in token_id or "." in token_id:
            continue
        if not token_id.isdigit():
            raise ConlluFormatError(f"non-numeric token ID {token_id!r} at line {lineno}", line=lineno)
        if not columns[6].isdigit():
            raise ConlluFormatError(f"non-numeric HEAD {columns[6]!r} at line {lineno}", line=lineno)
        index = int(token_id)
        head = int(columns[6])
        if index != len(nodes) + 1:
            raise ConlluFormatError(
                f"token ID {index} out of sequence at line {lineno}", line=lineno
            )
        if head == index:
            raise ConlluFormatError(f"token {index} is its own head at line {lineno}", line=lineno)
        word = columns[1].lower()
        lemma = columns[2].lower() if columns[2] != "_" else word
        pos = columns[4] if columns[4] != "_" else columns[3]
        nodes.append(DepNode(index=index, word=word, lemma=lemma, pos=pos))
        if head != 0:
            pending.append((head, index, columns[7], lineno))
    flush()
    return graphs


def align_graph(graph: DependencyGraph, sentence: Sentence) -> DependencyGraph:
    """Attach a tokenized sentence to a graph; words must match 1:1 in order."""
    if len(graph.nodes) != len(sentence.tokens):
        raise AlignmentError(
            f"graph has {len(graph.nodes)} nodes but sentence has {len(sentence.tokens)} tokens"
        )
    for node, token in zip(graph.nodes, sentence.tokens):
        if node.word != token.lowercased:
            raise AlignmentError(
                f"node {node.index} word {node.word!r} does not match token {token.lowercased!r}"
            )
    return replace(graph, sentence=sentence)


class ParseIndex:
    """Lookup of pre-parsed sentences by their lowercased token sequence."""

    def __init__(self, graphs: Iterable[DependencyGraph]):
        self.graphs = list(graphs)
        self._by_words = {tuple(n.word for n in g.nodes): g for g in self.graphs}

    def lookup(self, tokens: Sequence) -> DependencyGraph | None:
        return self._by_words.get(tuple(t.lowercased for t in tokens))

    @classmethod
    def from_dir(cls, directory: str | Path) -> "ParseIndex":
        graphs: list[DependencyGraph] = []
        for path in sorted(Path(directory).glob("*.conllu")):
            graphs.extend(parse_conllu(path.read_text(encoding="utf-8")))
        return cls(graphs)


class PatternKind(Enum):
    NEG = "NEG"
    POS = "POS"


@dataclass(frozen=True)
class ValueMatcher:
    value: str
    is_regex: bool

    def __post_init__(self) -> None:
        if self.is_regex:
            object.__setattr__(self, "_regex", re.compile(self.value))

    def matches(self, candidate: str) -> bool:
        if self.is_regex:
            return self._regex.fullmatch(candidate) is not None  # type: ignore[attr-defined]
        return candidate == self.value

    def unparse(self) -> str:
        return f"/{self.value}/" if self.is_regex else self.value


@dataclass(frozen=True)
class NodeSpec:
    negated: bool
    constraints: tuple[tuple[str, ValueMatcher], ...]
    binding: str | None

    def matches(self, node: DepNode) -> bool:
        satisfied = all(m.matches(getattr(node, attr)) for attr, m in self.constraints)
        return not satisfied if self.negated else satisfied


class Direction(Enum):
    GOVERNOR_OF = ">"
    DEPENDENT_OF = "<"
    CHAIN_GOVERNOR_OF = ">>"


@dataclass(frozen=True)
class RelationOp:
    direction: Direction
    label: ValueMatcher
    negated: bool


@dataclass(frozen=True)
class GraphPattern:
    root: NodeSpec
    constraints: tuple[tuple[RelationOp, "GraphPattern"], ...] = ()
    kind: PatternKind | None = None
    source_text: str = field(default="", compare=False)

    def bindings(self) -> list[str]:
        names = [] if self.root.binding is None else [self.root.binding]
        for _, child in self.constraints:
            names.extend(child.bindings())
        return names


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        # (name, offset, inside a negated relation operand)
        self.bindings: list[tuple[str, int, bool]] = []

    def fail(self, message: str) -> None:
        raise PatternSyntaxError(message, offset=self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, literal: str) -> bool:
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.take(literal):
            self.fail(f"expected {literal!r}")

    def parse_value(self) -> ValueMatcher:
        self.skip_ws()
        if self.take("/"):
            start = self.pos
            end = self.text.find("/", self.pos)
            if end < 0:
                self.pos = len(self.text)
                self.fail("unterminated regex value")
            value = self.text[start:end]
            try:
                re.compile(value)
            except re.error as exc:
                self.pos = start
                self.fail(f"invalid regex {value!r}: {exc}")
            self.pos = end + 1
            return ValueMatcher(value=value, is_regex=True)
        m = re.compile(r"[^\s{}()=;!<>/]+").match(self.text, self.pos)
        if m is None:
            self.fail("expected a value")
        self.pos = m.end()
        return ValueMatcher(value=m.group(), is_regex=False)

    def parse_node(self, under_negation: bool) -> NodeSpec:
        self.skip_ws()
        negated = self.take("!")
        self.skip_ws()
        self.expect("{")
        constraints: list[tuple[str, ValueMatcher]] = []
        self.skip_ws()
        if not self.take("}"):
            while True:
                self.skip_ws()
                m = re.compile(r"[a-z]+").match(self.text, self.pos)
                if m is None:
                    self.fail("expected an attribute name")
                attr = m.group()
                if attr not in NODE_ATTRIBUTES:
                    self.fail(f"unknown attribute {attr!r}")
                self.pos = m.end()
                self.skip_ws()
                self.expect(":")
                constraints.append((attr, self.parse_value()))
                self.skip_ws()
                if self.take("}"):
                    break
                self.expect(";")
        binding: str | None = None
        if self.take("="):
            offset = self.pos
            m = re.compile(r"[A-Za-z0-9_]+").match(self.text, self.pos)
            if m is None:
                self.fail("expected a binding name")
            binding = m.group()
            self.pos = m.end()
            if _BINDING_NAME.fullmatch(binding) is None:
                self.pos = offset
                self.fail(f"binding name must be 'gov' or 'dep[0-9]*', got {binding!r}")
            self.bindings.append((binding, offset, under_negation))
        return NodeSpec(negated=negated, constraints=tuple(constraints), binding=binding)

    def parse_relation(self) -> RelationOp:
        negated = self.take("!")
        self.skip_ws()
        if self.take(">>"):
            direction = Direction.CHAIN_GOVERNOR_OF
        elif self.take(">"):
            direction = Direction.GOVERNOR_OF
        elif self.take("<"):
            direction = Direction.DEPENDENT_OF
        else:
            self.fail("expected a relation ('<', '>' or '>>')")
        return RelationOp(direction=direction, label=self.parse_value(), negated=negated)

    def parse_pattern(self, under_negation: bool) -> GraphPattern:
        root = self.parse_node(under_negation)
        constraints: list[tuple[RelationOp, GraphPattern]] = []
        while True:
            self.skip_ws()
            if self.pos >= len(self.text) or self.peek() == ")":
                break
            relation = self.parse_relation()
            operand_negated = under_negation or relation.negated
            self.skip_ws()
            if self.take("("):
                child = self.parse_pattern(operand_negated)
                self.skip_ws()
                self.expect(")")
            else:
                child = GraphPattern(root=self.parse_node(operand_negated))
            constraints.append((relation, child))
        return GraphPattern(root=root, constraints=tuple(constraints))


def parse_pattern(text: str, kind: PatternKind | None = None) -> GraphPattern:
    """Parse one pattern; raises PatternSyntaxError with a character offset."""
    parser = _Parser(text)
    parser.skip_ws()
    if parser.pos >= len(text):
        raise PatternSyntaxError("empty pattern", offset=0)
    pattern = parser.parse_pattern(under_negation=False)
    parser.skip_ws()
    if parser.pos < len(text):
        parser.fail("unexpected trailing input")
    seen: set[str] = set()
    for name, offset, under_negation in parser.bindings:
        if under_negation:
            raise PatternSyntaxError(
                f"binding {name!r} inside a negated relation can never be reported",
                offset=offset,
            )
        if name in seen:
            raise PatternSyntaxError(f"duplicate binding {name!r}", offset=offset)
        seen.add(name)
    names = {name for name, _, _ in parser.bindings}
    if kind is not None:
        if not any(n.startswith("dep") for n in names):
            raise PatternSyntaxError(f"a {kind.value} pattern must bind at least one dep node", offset=0)
        if kind is PatternKind.NEG and "gov" not in names:
            raise PatternSyntaxError("a NEG pattern must bind a gov node", offset=0)
    return replace(pattern, kind=kind, source_text=text)


def unparse_pattern(pattern: GraphPattern) -> str:
    """Canonical single-spaced text form; parse(unparse(p)) == p."""

    def render_node(spec: NodeSpec) -> str:
        inner = ";".join(f"{attr}:{matcher.unparse()}" for attr, matcher in spec.constraints)
        text = ("!" if spec.negated else "") + "{" + inner + "}"
        if spec.binding is not None:
            text += f"={spec.binding}"
        return text

    def render(p: GraphPattern) -> str:
        parts = [render_node(p.root)]
        for relation, child in p.constraints:
            parts.append(
                ("!" if relation.negated else "")
                + relation.direction.value
                + " "
                + relation.label.unparse()
            )
            parts.append(f"({render(child)})" if child.constraints else render_node(child.root))
        return " ".join(parts)

    return render(pattern)


def parse_pattern_file(content: str) -> list[GraphPattern]:
    """Parse ``pattern<TAB>KIND`` lines, KIND being NEG or POS."""
    patterns: list[GraphPattern] = []
    for lineno, line in iter_resource_lines(content):
        columns = line.split("\t")
        if len(columns) != 2 or not columns[0].strip() or not columns[1].strip():
            raise ResourceFormatError(
                f"expected 'pattern<TAB>KIND' at line {lineno}", line=lineno
            )
        text, tag = columns[0].strip(), columns[1].strip()
        try:
            kind = PatternKind(tag)
        except ValueError:
            raise ResourceFormatError(
                f"unknown pattern kind {tag} at line {lineno}", line=lineno
            ) from None
        try:
            patterns.append(parse_pattern(text, kind))
        except PatternSyntaxError as exc:
            raise ResourceFormatError(
                f"invalid pattern at line {lineno}: {exc}", line=lineno
            ) from exc
    return patterns


@dataclass(frozen=True)
class PatternMatch:
    """One way a pattern embeds into a graph.

    `root` is the node matched by the pattern's first node spec; `bindings`
    maps binding names to node indices. Matches are deduplicated on both.
    """

    root: int
    bindings: tuple[tuple[str, int], ...]
    pattern: GraphPattern

    @property
    def binding_map(self) -> dict[str, int]:
        return dict(self.bindings)


def _chain_targets(
    graph: DependencyGraph, start: int, label: ValueMatcher, chain_label: str
) -> set[int]:
    targets: set[int] = set()
    if chain_label == "first_edge":
        for dep, edge_label in graph.dependents(start):
            if not label.matches(edge_label):
                continue
            stack = [dep]
            while stack:
                current = stack.pop()
                if current in targets:
                    continue
                targets.add(current)
                stack.extend(d for d, _ in graph.dependents(current))
    elif chain_label == "any_edge":
        seen: set[tuple[int, bool]] = set()
        stack = [(start, False)]
        while stack:
            current, matched = stack.pop()
            for dep, edge_label in graph.dependents(current):
                state = (dep, matched or label.matches(edge_label))
                if state[1]:
                    targets.add(dep)
                if state not in seen:
                    seen.add(state)
                    stack.append(state)
    else:
        raise ValueError(f"unknown chain_label mode {chain_label!r}")
    return targets


def _neighbors(
    graph: DependencyGraph, index: int, relation: RelationOp, chain_label: str
) -> list[int]:
    if relation.direction is Direction.GOVERNOR_OF:
        return [dep for dep, label in graph.dependents(index) if relation.label.matches(label)]
    if relation.direction is Direction.DEPENDENT_OF:
        return [gov for gov, label in graph.governors(index) if relation.label.matches(label)]
    return sorted(_chain_targets(graph, index, relation.label, chain_label))


def _assignments(
    pattern: GraphPattern, index: int, graph: DependencyGraph, chain_label: str
) -> Iterator[dict[str, int]]:
    node = graph.nodes[index - 1]
    if not pattern.root.matches(node):
        return
    base = {} if pattern.root.binding is None else {pattern.root.binding: index}

    def combine(position: int, acc: dict[str, int]) -> Iterator[dict[str, int]]:
        if position == len(pattern.constraints):
            yield acc
            return
        relation, child = pattern.constraints[position]
        neighbors = _neighbors(graph, index, relation, chain_label)
        if relation.negated:
            if any(
                next(_assignments(child, n, graph, chain_label), None) is not None
                for n in neighbors
            ):
                return
            yield from combine(position + 1, acc)
            return
        for n in neighbors:
            for sub in _assignments(child, n, graph, chain_label):
                yield from combine(position + 1, {**acc, **sub})

    yield from combine(0, base)


def match_pattern(
    pattern: GraphPattern, graph: DependencyGraph, chain_label: str = "first_edge"
) -> list[PatternMatch]:
    """All distinct embeddings of the pattern, ordered by (gov, dep, root)."""
    found: dict[tuple[int, tuple[tuple[str, int], ...]], PatternMatch] = {}
    for node in graph.nodes:
        for assignment in _assignments(pattern, node.index, graph, chain_label):
            bindings = tuple(sorted(assignment.items()))
            key = (node.index, bindings)
            if key not in found:
                found[key] = PatternMatch(root=node.index, bindings=bindings, pattern=pattern)
    return sorted(
        found.values(),
        key=lambda m: (
            m.binding_map.get("gov", 0),
            m.binding_map.get("dep", 0),
            m.root,
            m.bindings,
        ),
    )


def apply_pattern_set(
    patterns: Sequence[GraphPattern],
    graph: DependencyGraph,
    annotations: Sequence[NegationAnnotation],
    text: str | None = None,
    chain_label: str = "first_edge",
) -> list[NegationAnnotation]:
    """Rewrite assertions using NEG patterns first, then POS corrections.

    The graph must be aligned to a sentence. A NEG match negates every concept
    overlapping one of its dep-bound tokens, with the gov token as trigger; a
    POS match resets such concepts to Affirmed and always wins over NEG.
    """
    if graph.sentence is None:
        raise AlignmentError("graph is not aligned to a sentence")
    tokens = graph.sentence.tokens
    result = list(annotations)

    def token_span(index: int) -> Span:
        return tokens[index - 1].span

    def apply_kind(kind: PatternKind) -> None:
        for pattern in patterns:
            if pattern.kind is not kind:
                continue
            for match in match_pattern(pattern, graph, chain_label):
                mapping = match.binding_map
                gov_span = token_span(mapping["gov"]) if "gov" in mapping else None
                gov_text = None
                if gov_span is not None:
                    gov_text = gov_span.slice(text) if text is not None else tokens[mapping["gov"] - 1].text
                dep_spans = [token_span(v) for k, v in mapping.items() if k.startswith("dep")]
                for i, annotation in enumerate(result):
                    if not any(span_overlaps(s, annotation.concept.span) for s in dep_spans):
                        continue
                    if kind is PatternKind.NEG:
                        result[i] = NegationAnnotation(
                            concept=annotation.concept,
                            assertion=Assertion.NEGATED,
                            source=AnnotationSource.DEP_PATTERN_NEG,
                            trigger_span=gov_span,
                            trigger_text=gov_text,
                        )
                    else:
                        result[i] = NegationAnnotation(
                            concept=annotation.concept,
                            assertion=Assertion.AFFIRMED,
                            source=AnnotationSource.DEP_PATTERN_POS_CORRECTION,
                            trigger_span=gov_span,
                            trigger_text=gov_text,
                        )

    apply_kind(PatternKind.NEG)
    apply_kind(PatternKind.POS)
    return result
