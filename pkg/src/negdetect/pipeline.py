"""Resource loading and the end-to-end annotation pipeline.

The default resource directory ships with the package; the NEGDETECT_RESOURCES
environment variable overrides it, and explicit path arguments override both.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .deppat import GraphPattern, ParseIndex, align_graph, apply_pattern_set, parse_pattern_file
from .errors import ResourceFormatError
from .negex import NegexConfig, TriggerSet, apply_negex, parse_trigger_file
from .preprocess import (
    CompoundLexicon,
    ConceptDictionary,
    SegmenterConfig,
    StopwordList,
    annotate_concepts,
    attach_compound_parts,
    mark_stopwords,
    parse_abbreviations,
    parse_compound_lexicon,
    parse_concepts,
    parse_segmenter_config,
    parse_stopwords,
    segment_sentences,
    tokenize,
)
from .textmodel import Document, NegationAnnotation, Sentence, with_tokens

RESOURCES_ENV = "NEGDETECT_RESOURCES"
PORT_ENV = "NEGDETECT_PORT"
DEFAULT_PORT = 8127


def resource_dir() -> Path:
    override = os.environ.get(RESOURCES_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "resources"


@dataclass(frozen=True)
class ResourcePaths:
    triggers: tuple[Path, ...]
    concepts: Path
    stopwords: Path
    compounds: Path
    abbreviations: Path
    segmenter: Path
    patterns: Path | None = None
    conllu_dir: Path | None = None


def default_paths(
    base: Path | None = None,
    *,
    triggers: Path | None = None,
    concepts: Path | None = None,
    stopwords: Path | None = None,
    compounds: Path | None = None,
    patterns: Path | None = None,
    conllu_dir: Path | None = None,
) -> ResourcePaths:
    """Resolve resource paths: explicit argument > NEGDETECT_RESOURCES > packaged."""
    root = base if base is not None else resource_dir()
    default_triggers = tuple(
        p for p in (root / "triggers_ots.tsv", root / "triggers_mts.tsv") if p.exists()
    )
    return ResourcePaths(
        triggers=(triggers,) if triggers is not None else default_triggers,
        concepts=concepts if concepts is not None else root / "concepts.tsv",
        stopwords=stopwords if stopwords is not None else root / "stopwords.txt",
        compounds=compounds if compounds is not None else root / "compound_lexicon.txt",
        abbreviations=root / "abbreviations.txt",
        segmenter=root / "segmenter.conf",
        patterns=patterns,
        conllu_dir=conllu_dir,
    )


def trigger_set_name(path: Path) -> str:
    stem = path.stem
    return stem[len("triggers_"):] if stem.startswith("triggers_") else stem


@dataclass(frozen=True)
class Resources:
    segmenter: SegmenterConfig
    stopwords: StopwordList
    lexicon: CompoundLexicon
    concepts: ConceptDictionary
    # Name -> set; the first loaded file is the default.
    trigger_sets: dict[str, TriggerSet] = field(default_factory=dict)
    default_trigger_set: str = ""
    patterns: tuple[GraphPattern, ...] = ()
    parses: ParseIndex | None = None

    def trigger_set(self, name: str | None = None) -> TriggerSet:
        key = name if name is not None else self.default_trigger_set
        if key not in self.trigger_sets:
            available = ", ".join(sorted(self.trigger_sets))
            raise ValueError(f"unknown trigger set {key!r}; available: {available}")
        return self.trigger_sets[key]


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceFormatError(f"cannot read {path}: {exc}", path=str(path)) from exc


def load_resources(paths: ResourcePaths) -> Resources:
    if not paths.triggers:
        raise ResourceFormatError("no trigger files configured")
    abbreviations = (
        parse_abbreviations(_read(paths.abbreviations)) if paths.abbreviations.exists() else frozenset()
    )
    segmenter = (
        parse_segmenter_config(_read(paths.segmenter), abbreviations)
        if paths.segmenter.exists()
        else SegmenterConfig(abbreviations=abbreviations)
    )
    trigger_sets: dict[str, TriggerSet] = {}
    for trigger_path in paths.triggers:
        name = trigger_set_name(trigger_path)
        trigger_sets[name] = parse_trigger_file(_read(trigger_path), name=name)
    patterns: tuple[GraphPattern, ...] = ()
    if paths.patterns is not None:
        patterns = tuple(parse_pattern_file(_read(paths.patterns)))
    parses = ParseIndex.from_dir(paths.conllu_dir) if paths.conllu_dir is not None else None
    return Resources(
        segmenter=segmenter,
        stopwords=parse_stopwords(_read(paths.stopwords)),
        lexicon=parse_compound_lexicon(_read(paths.compounds)),
        concepts=parse_concepts(_read(paths.concepts)),
        trigger_sets=trigger_sets,
        default_trigger_set=trigger_set_name(paths.triggers[0]),
        patterns=patterns,
        parses=parses,
    )


_UNSET = object()


class Pipeline:
    """Segment, tokenize, annotate concepts, then decide assertions."""

    def __init__(
        self,
        resources: Resources,
        config: NegexConfig = NegexConfig(),
        chain_label: str = "first_edge",
    ):
        self.resources = resources
        self.config = config
        self.chain_label = chain_label

    def annotate(
        self,
        text: str,
        trigger_set: str | None = None,
        window: int | None | object = _UNSET,
    ) -> Document:
        res = self.resources
        triggers = res.trigger_set(trigger_set)
        config = self.config if window is _UNSET else replace(self.config, window=window)
        sentences = []
        for bare in segment_sentences(text, res.segmenter):
            tokens = tokenize(bare.span.slice(text), res.segmenter, base=bare.span.begin)
            tokens = mark_stopwords(tokens, res.stopwords)
            tokens = attach_compound_parts(tokens, res.lexicon)
            sentences.append(with_tokens(bare, tuple(tokens)))
        annotations: list[NegationAnnotation] = []
        for sentence in sentences:
            concepts = annotate_concepts(sentence, res.concepts, res.lexicon, text)
            decided = apply_negex(sentence, concepts, triggers, config, text)
            if res.patterns and res.parses is not None:
                graph = res.parses.lookup(sentence.tokens)
                if graph is not None:
                    decided = apply_pattern_set(
                        res.patterns,
                        align_graph(graph, sentence),
                        decided,
                        text,
                        self.chain_label,
                    )
            annotations.extend(decided)
        return Document(text=text, sentences=tuple(sentences), annotations=tuple(annotations))
