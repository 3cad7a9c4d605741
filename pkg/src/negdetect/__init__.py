"""Negation detection for German clinical text.

Two complementary detectors over a shared span-based document model: regex
trigger scopes with a token window, and dependency-graph patterns applied to
CoNLL-U parses. Includes a gold-standard evaluation harness, a CLI and an
HTTP API.
"""

from .errors import (
    AlignmentError,
    ConlluFormatError,
    NegdetectError,
    PatternSyntaxError,
    ResourceFormatError,
)
from .negex import NegexConfig, TriggerSet, TriggerType, apply_negex, parse_trigger_file
from .pipeline import Pipeline, Resources, default_paths, load_resources
from .textmodel import (
    AnnotationSource,
    Assertion,
    ConceptAnnotation,
    Document,
    NegationAnnotation,
    Sentence,
    Span,
    Token,
    document_to_json,
    span_overlaps,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "AnnotationSource",
    "Assertion",
    "ConceptAnnotation",
    "ConlluFormatError",
    "Document",
    "NegationAnnotation",
    "NegdetectError",
    "NegexConfig",
    "PatternSyntaxError",
    "Pipeline",
    "ResourceFormatError",
    "Resources",
    "Sentence",
    "Span",
    "Token",
    "TriggerSet",
    "TriggerType",
    "apply_negex",
    "default_paths",
    "document_to_json",
    "load_resources",
    "parse_trigger_file",
    "span_overlaps",
    "__version__",
]
