"""Gold-standard evaluation: confusion counts, metrics, scope sweeps.

Gold data is TSV with three columns: concept phrase, sentence, tag
(Affirmed or Negated). Rows with other tags are skipped and counted.
The concept dictionary for a run is built from the gold concepts themselves,
so every record's concept can be located in its sentence unless tokenization
or compound splitting fails; such records land in the diagnostics bucket
instead of the confusion matrix.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .deppat import GraphPattern, ParseIndex, align_graph, apply_pattern_set
from .errors import ResourceFormatError
from .negex import NegexConfig, TriggerSet, apply_negex
from .preprocess import (
    CompoundLexicon,
    ConceptDictionary,
    DEFAULT_CATEGORY,
    SegmenterConfig,
    StopwordList,
    annotate_concepts,
    attach_compound_parts,
    iter_resource_lines,
    mark_stopwords,
    tokenize,
)
from .textmodel import Assertion, Sentence, Span

VALID_TAGS = {a.value: a for a in Assertion}


@dataclass(frozen=True)
class GoldRecord:
    concept: str
    sentence: str
    label: Assertion


@dataclass(frozen=True)
class GoldCorpus:
    records: tuple[GoldRecord, ...]
    # Data rows whose tag was neither Affirmed nor Negated.
    skipped: int


def parse_gold(content: str) -> GoldCorpus:
    records: list[GoldRecord] = []
    skipped = 0
    for lineno, line in iter_resource_lines(content):
        columns = line.split("\t")
        if len(columns) < 3:
            raise ResourceFormatError(
                f"expected 'concept<TAB>sentence<TAB>tag' at line {lineno}", line=lineno
            )
        concept, sentence, tag = columns[0].strip(), columns[1].strip(), columns[2].strip()
        if not concept or not sentence:
            raise ResourceFormatError(
                f"empty concept or sentence at line {lineno}", line=lineno
            )
        label = VALID_TAGS.get(tag)
        if label is None:
            skipped += 1
            continue
        records.append(GoldRecord(concept=concept, sentence=sentence, label=label))
    return GoldCorpus(records=tuple(records), skipped=skipped)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.tn + other.tn, self.fp + other.fp, self.fn + other.fn
        )


@dataclass(frozen=True)
class Metrics:
    """Each value is None when its denominator is zero."""

    accuracy: float | None
    precision: float | None
    recall: float | None
    f1: float | None


def compute_metrics(counts: ConfusionCounts) -> Metrics:
    accuracy = (counts.tp + counts.tn) / counts.total if counts.total else None
    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else None
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else None
    f1 = None
    if precision is not None and recall is not None and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    return Metrics(accuracy=accuracy, precision=precision, recall=recall, f1=f1)


def format_metric(value: float | None) -> str:
    """Three decimals, half-up, computed on the exact value; 'n/a' for None."""
    if value is None:
        return "n/a"
    return str(Decimal(str(value)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class EvalConfig:
    segmenter: SegmenterConfig
    stopwords: StopwordList
    lexicon: CompoundLexicon
    trigger_set: TriggerSet
    negex: NegexConfig
    patterns: tuple[GraphPattern, ...] = ()
    parses: ParseIndex | None = None
    # "first": score the first dictionary occurrence of the gold concept;
    # "any-negated": predict Negated when any occurrence is negated.
    occurrence: str = "first"
    chain_label: str = "first_edge"

    def __post_init__(self) -> None:
        if self.occurrence not in ("first", "any-negated"):
            raise ValueError(f"unknown occurrence policy {self.occurrence!r}")


@dataclass(frozen=True)
class EvalResult:
    counts: ConfusionCounts
    metrics: Metrics
    skipped: int
    # Records whose concept could not be located in their sentence.
    diagnostics: tuple[GoldRecord, ...]
    predictions: tuple[tuple[GoldRecord, Assertion], ...]
    # (trigger id, fire count), most frequent first.
    trigger_fires: tuple[tuple[str, int], ...]


def _predict(record: GoldRecord, config: EvalConfig, dictionary: ConceptDictionary):
    text = record.sentence
    tokens = tokenize(text, config.segmenter)
    tokens = mark_stopwords(tokens, config.stopwords)
    tokens = attach_compound_parts(tokens, config.lexicon)
    sentence = Sentence(span=Span(0, len(text)), tokens=tuple(tokens))
    concepts = annotate_concepts(sentence, dictionary, config.lexicon, text)
    annotations = apply_negex(sentence, concepts, config.trigger_set, config.negex, text)
    if config.patterns and config.parses is not None:
        graph = config.parses.lookup(tokens)
        if graph is not None:
            annotations = apply_pattern_set(
                config.patterns,
                align_graph(graph, sentence),
                annotations,
                text,
                config.chain_label,
            )
    wanted = " ".join(record.concept.lower().split())
    mine = [a for a in annotations if a.concept.dictionary_entry == wanted]
    if not mine:
        return None
    if config.occurrence == "first":
        return min(mine, key=lambda a: a.concept.span.begin)
    negated = [a for a in mine if a.assertion is Assertion.NEGATED]
    return negated[0] if negated else mine[0]


def build_dictionary(corpus: GoldCorpus) -> ConceptDictionary:
    return ConceptDictionary.from_entries(
        (record.concept, DEFAULT_CATEGORY) for record in corpus.records
    )


def evaluate(corpus: GoldCorpus, config: EvalConfig) -> EvalResult:
    dictionary = build_dictionary(corpus)
    counts = ConfusionCounts()
    diagnostics: list[GoldRecord] = []
    predictions: list[tuple[GoldRecord, Assertion]] = []
    fires: Counter[str] = Counter()
    for record in corpus.records:
        chosen = _predict(record, config, dictionary)
        if chosen is None:
            diagnostics.append(record)
            continue
        predicted = chosen.assertion
        predictions.append((record, predicted))
        if predicted is Assertion.NEGATED and chosen.trigger_id is not None:
            fires[chosen.trigger_id] += 1
        gold_negated = record.label is Assertion.NEGATED
        predicted_negated = predicted is Assertion.NEGATED
        if gold_negated and predicted_negated:
            counts += ConfusionCounts(tp=1)
        elif gold_negated:
            counts += ConfusionCounts(fn=1)
        elif predicted_negated:
            counts += ConfusionCounts(fp=1)
        else:
            counts += ConfusionCounts(tn=1)
    ordered_fires = tuple(sorted(fires.items(), key=lambda kv: (-kv[1], kv[0])))
    return EvalResult(
        counts=counts,
        metrics=compute_metrics(counts),
        skipped=corpus.skipped,
        diagnostics=tuple(diagnostics),
        predictions=tuple(predictions),
        trigger_fires=ordered_fires,
    )


def trigger_frequency_report(corpus: GoldCorpus, config: EvalConfig) -> tuple[tuple[str, int], ...]:
    return evaluate(corpus, config).trigger_fires


def diff_predictions(
    corpus: GoldCorpus, config_a: EvalConfig, config_b: EvalConfig
) -> list[tuple[GoldRecord, Assertion | None, Assertion | None]]:
    """Records where the two configurations disagree (None = concept not found)."""
    dict_a = build_dictionary(corpus)
    differences = []
    for record in corpus.records:
        a = _predict(record, config_a, dict_a)
        b = _predict(record, config_b, dict_a)
        assertion_a = a.assertion if a is not None else None
        assertion_b = b.assertion if b is not None else None
        if assertion_a != assertion_b:
            differences.append((record, assertion_a, assertion_b))
    return differences


DEFAULT_WINDOWS: tuple[int | None, ...] = (None, 5, 4, 3)


def window_label(window: int | None) -> str:
    return "inf" if window is None else str(window)


def parse_window(label: str) -> int | None:
    if label.strip().lower() in ("inf", "unlimited", "none"):
        return None
    try:
        return int(label)
    except ValueError:
        raise ValueError(f"window must be an integer or 'inf', got {label!r}") from None


@dataclass(frozen=True)
class SweepRow:
    trigger_set: str
    window: int | None
    counts: ConfusionCounts
    metrics: Metrics


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    windows: tuple[int | None, ...]
    trigger_sets: tuple[str, ...]


def sweep(
    corpus: GoldCorpus,
    trigger_sets: Sequence[TriggerSet],
    windows: Sequence[int | None],
    base_config: EvalConfig,
) -> SweepResult:
    """Evaluate every trigger set under every scope window, in the given order."""
    rows: list[SweepRow] = []
    for trigger_set in trigger_sets:
        for window in windows:
            config = replace(
                base_config,
                trigger_set=trigger_set,
                negex=replace(base_config.negex, window=window),
            )
            result = evaluate(corpus, config)
            rows.append(
                SweepRow(
                    trigger_set=trigger_set.name,
                    window=window,
                    counts=result.counts,
                    metrics=result.metrics,
                )
            )
    return SweepResult(
        rows=tuple(rows),
        windows=tuple(windows),
        trigger_sets=tuple(t.name for t in trigger_sets),
    )


def sweep_to_tsv(result: SweepResult) -> str:
    lines = ["trigger_set\twindow\ttp\ttn\tfp\tfn\taccuracy\tprecision\trecall\tf1"]
    for row in result.rows:
        c, m = row.counts, row.metrics
        lines.append(
            "\t".join(
                [
                    row.trigger_set,
                    window_label(row.window),
                    str(c.tp),
                    str(c.tn),
                    str(c.fp),
                    str(c.fn),
                    format_metric(m.accuracy),
                    format_metric(m.precision),
                    format_metric(m.recall),
                    format_metric(m.f1),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def sweep_to_text(result: SweepResult) -> str:
    """F1 grid: one row per trigger set, one column per scope window."""
    by_key = {(row.trigger_set, row.window): row for row in result.rows}
    name_width = max([len("trigger set")] + [len(n) for n in result.trigger_sets])
    header = "trigger set".ljust(name_width) + "".join(
        f"  scope {window_label(w):>4}" for w in result.windows
    )
    lines = [header]
    for name in result.trigger_sets:
        cells = []
        for window in result.windows:
            row = by_key[(name, window)]
            cells.append(f"  {format_metric(row.metrics.f1):>10}")
        lines.append(name.ljust(name_width) + "".join(cells))
    return "\n".join(lines) + "\n"


def sweep_to_json(result: SweepResult) -> list[dict]:
    rows = []
    for row in result.rows:
        c, m = row.counts, row.metrics
        rows.append(
            {
                "trigger_set": row.trigger_set,
                "window": window_label(row.window),
                "tp": c.tp,
                "tn": c.tn,
                "fp": c.fp,
                "fn": c.fn,
                "accuracy": m.accuracy,
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
            }
        )
    return rows
