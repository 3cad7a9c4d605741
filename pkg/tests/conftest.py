"""Shared fixtures: packaged resources, the shipped gold corpus, helpers."""

from __future__ import annotations

from pathlib import Path

import pytest

import negdetect
from negdetect.evalharness import EvalConfig, GoldCorpus, parse_gold
from negdetect.negex import NegexConfig
from negdetect.pipeline import Resources, default_paths, load_resources
from negdetect.preprocess import SegmenterConfig, tokenize
from negdetect.textmodel import Sentence, Span


@pytest.fixture(scope="session")
def resource_base() -> Path:
    return Path(negdetect.__file__).parent / "resources"


@pytest.fixture(scope="session")
def resources(resource_base: Path) -> Resources:
    return load_resources(default_paths(resource_base))


@pytest.fixture(scope="session")
def resources_full(resource_base: Path) -> Resources:
    """Resources with the dependency patterns and pre-parsed sentences loaded."""
    return load_resources(
        default_paths(
            resource_base,
            patterns=resource_base / "patterns.tsv",
            conllu_dir=resource_base / "conllu",
        )
    )


@pytest.fixture(scope="session")
def gold_corpus(resource_base: Path) -> GoldCorpus:
    return parse_gold((resource_base / "gold_synthetic.tsv").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def make_sentence():
    """Build a single-sentence Sentence from raw text with default tokenization."""
    config = SegmenterConfig()

    def build(text: str) -> Sentence:
        return Sentence(span=Span(0, len(text)), tokens=tuple(tokenize(text, config)))

    return build


@pytest.fixture(scope="session")
def make_eval_config(resources: Resources):
    def build(trigger_set: str = "ots", window: int | None = None, **overrides) -> EvalConfig:
        kwargs = dict(
            segmenter=resources.segmenter,
            stopwords=resources.stopwords,
            lexicon=resources.lexicon,
            trigger_set=resources.trigger_set(trigger_set),
            negex=NegexConfig(window=window),
        )
        kwargs.update(overrides)
        return EvalConfig(**kwargs)

    return build
