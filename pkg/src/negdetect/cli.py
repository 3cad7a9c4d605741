"""Command line interface: annotate, evaluate, sweep, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import NegdetectError
from .evalharness import (
    DEFAULT_WINDOWS,
    EvalConfig,
    evaluate,
    format_metric,
    parse_gold,
    parse_window,
    sweep,
    sweep_to_json,
    sweep_to_text,
    sweep_to_tsv,
    window_label,
)
from .negex import NegexConfig
from .pipeline import (
    DEFAULT_PORT,
    PORT_ENV,
    Pipeline,
    default_paths,
    load_resources,
)
from .textmodel import Document, document_to_json


def _add_resource_args(parser: argparse.ArgumentParser, with_patterns: bool = True) -> None:
    parser.add_argument("--triggers", type=Path, help="trigger file (regex<TAB>TYPE)")
    parser.add_argument("--concepts", type=Path, help="concept dictionary (phrase<TAB>category)")
    parser.add_argument("--stopwords", type=Path, help="stopword list, one per line")
    parser.add_argument("--compounds", type=Path, help="compound constituent lexicon")
    if with_patterns:
        parser.add_argument("--patterns", type=Path, help="dependency pattern file (pattern<TAB>KIND)")
        parser.add_argument("--conllu-dir", type=Path, help="directory of .conllu parses")


def _add_window_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--window",
        default="inf",
        help="scope window in tokens, or 'inf' for unlimited (default: inf)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negdetect",
        description="Negation detection for German clinical text.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    annotate = sub.add_parser("annotate", help="annotate free text with negated concepts")
    annotate.add_argument("input", nargs="?", type=Path, help="input text file (default: stdin)")
    _add_resource_args(annotate)
    _add_window_arg(annotate)
    annotate.add_argument("--trigger-set", help="name of the trigger set to use")
    annotate.add_argument("--format", choices=("json", "tsv", "text"), default="json")

    evaluate_cmd = sub.add_parser("evaluate", help="score predictions against a gold TSV")
    evaluate_cmd.add_argument("gold", type=Path, help="gold file (concept<TAB>sentence<TAB>tag)")
    _add_resource_args(evaluate_cmd)
    _add_window_arg(evaluate_cmd)
    evaluate_cmd.add_argument("--trigger-set", help="name of the trigger set to use")
    evaluate_cmd.add_argument(
        "--occurrence",
        choices=("first", "any-negated"),
        default="first",
        help="which occurrence of the gold concept is scored",
    )
    evaluate_cmd.add_argument("--format", choices=("json", "tsv", "text"), default="text")

    sweep_cmd = sub.add_parser("sweep", help="evaluate all trigger sets across scope windows")
    sweep_cmd.add_argument("gold", type=Path)
    _add_resource_args(sweep_cmd)
    sweep_cmd.add_argument(
        "--windows",
        default=",".join(window_label(w) for w in DEFAULT_WINDOWS),
        help="comma-separated windows, e.g. 'inf,5,4,3'",
    )
    sweep_cmd.add_argument("--format", choices=("json", "tsv", "text"), default="text")

    serve = sub.add_parser("serve", help="run the HTTP API")
    _add_resource_args(serve)
    _add_window_arg(serve)
    serve.add_argument("--port", type=int, help=f"TCP port (default: ${PORT_ENV} or {DEFAULT_PORT})")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--static-dir", type=Path, help="directory with the web UI build")
    return parser


def _load(args: argparse.Namespace):
    if getattr(args, "patterns", None) is not None and getattr(args, "conllu_dir", None) is None:
        raise NegdetectError("dependency patterns require parses")
    paths = default_paths(
        triggers=args.triggers,
        concepts=args.concepts,
        stopwords=args.stopwords,
        compounds=args.compounds,
        patterns=getattr(args, "patterns", None),
        conllu_dir=getattr(args, "conllu_dir", None),
    )
    return load_resources(paths)


def _document_tsv(doc: Document) -> str:
    lines = ["begin\tend\ttext\tcategory\tassertion\ttrigger"]
    for ann in doc.annotations:
        trigger = ann.trigger_text if ann.trigger_text is not None else ""
        lines.append(
            f"{ann.concept.span.begin}\t{ann.concept.span.end}\t{ann.concept.matched_text}"
            f"\t{ann.concept.category}\t{ann.assertion.value}\t{trigger}"
        )
    return "\n".join(lines) + "\n"


def _document_text(doc: Document) -> str:
    lines = []
    for ann in doc.annotations:
        marker = "-" if ann.assertion.value == "Negated" else "+"
        detail = f" [{ann.source.value}: {ann.trigger_text}]" if ann.trigger_text else ""
        lines.append(f"{marker} {ann.concept.matched_text} ({ann.concept.category}){detail}")
    return "\n".join(lines) + "\n" if lines else "no concepts found\n"


def _cmd_annotate(args: argparse.Namespace) -> int:
    resources = _load(args)
    window = parse_window(args.window)
    pipeline = Pipeline(resources, NegexConfig(window=window))
    text = args.input.read_text(encoding="utf-8") if args.input else sys.stdin.read()
    doc = pipeline.annotate(text, trigger_set=args.trigger_set)
    if args.format == "json":
        print(json.dumps(document_to_json(doc), ensure_ascii=False, indent=2))
    elif args.format == "tsv":
        sys.stdout.write(_document_tsv(doc))
    else:
        sys.stdout.write(_document_text(doc))
    return 0


def _eval_config(args: argparse.Namespace, resources, window) -> EvalConfig:
    return EvalConfig(
        segmenter=resources.segmenter,
        stopwords=resources.stopwords,
        lexicon=resources.lexicon,
        trigger_set=resources.trigger_set(getattr(args, "trigger_set", None)),
        negex=NegexConfig(window=window),
        patterns=resources.patterns,
        parses=resources.parses,
        occurrence=getattr(args, "occurrence", "first"),
    )


def _cmd_evaluate(args: argparse.Namespace) -> int:
    resources = _load(args)
    corpus = parse_gold(args.gold.read_text(encoding="utf-8"))
    config = _eval_config(args, resources, parse_window(args.window))
    result = evaluate(corpus, config)
    c, m = result.counts, result.metrics
    if args.format == "json":
        payload = {
            "counts": {"tp": c.tp, "tn": c.tn, "fp": c.fp, "fn": c.fn},
            "metrics": {
                "accuracy": m.accuracy,
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
            },
            "skipped": result.skipped,
            "not_found": [r.concept for r in result.diagnostics],
            "trigger_fires": [{"trigger": t, "count": n} for t, n in result.trigger_fires],
        }
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    elif args.format == "tsv":
        print("tp\ttn\tfp\tfn\taccuracy\tprecision\trecall\tf1")
        print(
            f"{c.tp}\t{c.tn}\t{c.fp}\t{c.fn}\t{format_metric(m.accuracy)}"
            f"\t{format_metric(m.precision)}\t{format_metric(m.recall)}\t{format_metric(m.f1)}"
        )
    else:
        print(f"records:   {c.total} scored, {result.skipped} skipped, {len(result.diagnostics)} not found")
        print(f"counts:    tp={c.tp} tn={c.tn} fp={c.fp} fn={c.fn}")
        print(f"accuracy:  {format_metric(m.accuracy)}")
        print(f"precision: {format_metric(m.precision)}")
        print(f"recall:    {format_metric(m.recall)}")
        print(f"f1:        {format_metric(m.f1)}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    resources = _load(args)
    corpus = parse_gold(args.gold.read_text(encoding="utf-8"))
    windows = tuple(parse_window(w) for w in args.windows.split(","))
    base = EvalConfig(
        segmenter=resources.segmenter,
        stopwords=resources.stopwords,
        lexicon=resources.lexicon,
        trigger_set=resources.trigger_set(),
        negex=NegexConfig(),
        patterns=resources.patterns,
        parses=resources.parses,
    )
    ordered = [resources.trigger_sets[name] for name in resources.trigger_sets]
    result = sweep(corpus, ordered, windows, base)
    if args.format == "json":
        print(json.dumps(sweep_to_json(result), ensure_ascii=False, indent=2))
    elif args.format == "tsv":
        sys.stdout.write(sweep_to_tsv(result))
    else:
        sys.stdout.write(sweep_to_text(result))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    resources = _load(args)
    window = parse_window(args.window)
    port = args.port
    if port is None:
        port = int(os.environ.get(PORT_ENV, DEFAULT_PORT))
    app = create_app(resources, NegexConfig(window=window), static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


_COMMANDS = {
    "annotate": _cmd_annotate,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NegdetectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
