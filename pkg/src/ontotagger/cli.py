"""Command-line interface.

Subcommands: classify, evaluate, inspect, build-gold, serve. The classify
and inspect commands can either load resources locally or act as thin
clients of a running service (--server).

Exit codes: 0 success; 2 unreadable/invalid input; 3 resource error;
4 evaluation paper-id mismatch (or empty predictions); 5 unknown topic
label; 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import WindowConfig
from .evaluation import (
    IdMismatchError,
    evaluate_sets,
    kappa_per_paper,
    kappa_summary,
    majority_gold,
    read_annotations,
    read_topic_sets,
    report_to_dict,
    write_topic_sets,
)
from .ontology import UnknownTopicError
from .pipeline import CombinerConfig, Document, SemanticConfig, SyntacticConfig
from .resources import ResourceBundle, ResourceError, ResourcePaths, load_resources
from .runner import (
    MODES,
    TSV_HEADER,
    RunOptions,
    mode_requirements,
    result_to_json,
    result_to_tsv,
    run_batch,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_ID_MISMATCH = 4
EXIT_UNKNOWN_LABEL = 5


def _add_resource_args(parser: argparse.ArgumentParser, embeddings: bool = True) -> None:
    parser.add_argument("--ontology", help="ontology CSV file")
    if embeddings:
        parser.add_argument("--embeddings", help="embedding text file")
        parser.add_argument("--idf", help="idf table file (tfidf mode)")
    parser.add_argument("--stoplist", help="stopword list file (default: bundled)")
    parser.add_argument("--lexicon", help="tagger lexicon file (default: bundled)")


def _add_threshold_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=MODES, default="both")
    parser.add_argument("--msm", type=float, default=0.94,
                        help="minimum syntactic similarity (default 0.94)")
    parser.add_argument("--max-n", type=int, default=3, help="largest n-gram size")
    parser.add_argument("--sim-threshold", type=float, default=0.7,
                        help="semantic neighbor cosine threshold (default 0.7)")
    parser.add_argument("--top-similar", type=int, default=10,
                        help="semantic neighbors per gram (default 10)")
    parser.add_argument("--filter-top-n", type=int, default=3000,
                        help="generic-term vocabulary cutoff (default 3000)")
    parser.add_argument("--enhancement", choices=("none", "direct", "all"), default="direct")
    parser.add_argument("--window-size", type=int, default=10)
    parser.add_argument("--window-stride", type=int, default=5)
    parser.add_argument("--window-top", type=int, default=20)
    parser.add_argument("--window-threshold", type=float, default=0.6)
    parser.add_argument("--map-threshold", type=float, default=0.8,
                        help="tfidf-to-label similarity threshold (default 0.8)")
    parser.add_argument("--top-terms", type=int, default=20,
                        help="tfidf terms considered per document (default 20)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontotagger",
                                     description="Ontology-driven research-topic annotation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cls = sub.add_parser("classify", help="annotate documents with ontology topics")
    p_cls.add_argument("input", help="JSON-lines file, plain-text file, or '-' for stdin")
    p_cls.add_argument("-o", "--output", help="output file (default stdout)")
    p_cls.add_argument("--format", choices=("json", "tsv"), default="json")
    p_cls.add_argument("--workers", type=int, default=1)
    p_cls.add_argument("--server", help="classify via a running service instead of local resources")
    _add_resource_args(p_cls)
    _add_threshold_args(p_cls)

    p_eval = sub.add_parser("evaluate", help="score predictions against a gold standard")
    p_eval.add_argument("predictions", help="predictions JSON-lines file")
    p_eval.add_argument("gold", help="gold-standard JSON-lines file")
    p_eval.add_argument("--enrich", action="store_true",
                        help="expand both sides with direct super-topics")
    p_eval.add_argument("--gold-enriched", action="store_true",
                        help="gold sets already include supers; enrich predictions only")
    p_eval.add_argument("-o", "--output", help="output file (default stdout)")
    _add_resource_args(p_eval, embeddings=False)

    p_ins = sub.add_parser("inspect", help="show one topic's card")
    p_ins.add_argument("label", help="topic label (canonical or alternate)")
    p_ins.add_argument("--server", help="inspect via a running service")
    _add_resource_args(p_ins, embeddings=False)

    p_gold = sub.add_parser("build-gold", help="majority-vote gold standard from annotations")
    p_gold.add_argument("annotations", help="annotations JSON-lines file")
    p_gold.add_argument("-o", "--output", required=True, help="gold JSON-lines output file")
    p_gold.add_argument("--min-raters", type=int, default=3)
    p_gold.add_argument("--kappa", action="store_true",
                        help="also report per-paper Fleiss' kappa (mean and std)")
    _add_resource_args(p_gold, embeddings=False)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    _add_resource_args(p_srv)
    _add_threshold_args(p_srv)

    return parser


def _options_from_args(args) -> RunOptions:
    return RunOptions(
        mode=args.mode,
        syntactic=SyntacticConfig(msm=args.msm, max_n=args.max_n),
        semantic=SemanticConfig(top_k=args.top_similar, sim_threshold=args.sim_threshold),
        combiner=CombinerConfig(generic_filter_n=args.filter_top_n, enhancement=args.enhancement),
        window=WindowConfig(window_size=args.window_size, stride=args.window_stride,
                            top_k=args.window_top, sim_threshold=args.window_threshold),
        map_threshold=args.map_threshold,
        top_terms=args.top_terms,
    )


def _bundle_from_args(args) -> ResourceBundle:
    needs_store, needs_idf = mode_requirements(getattr(args, "mode", "syntactic"))
    paths = ResourcePaths(
        ontology=args.ontology,
        embeddings=getattr(args, "embeddings", None),
        stoplist=args.stoplist,
        lexicon=args.lexicon,
        idf=getattr(args, "idf", None),
    )
    return load_resources(paths, require_embeddings=needs_store, require_idf=needs_idf)


def _read_documents(path: str) -> list[tuple[str, Document]]:
    """JSON-lines documents, or a plain text file (title line, then abstract)."""
    if path == "-":
        text = sys.stdin.read()
        name = "stdin"
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ValueError(f"cannot read input {path}: {exc}") from None
        name = path
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError(f"{name}: no documents found")
    if lines[0].lstrip().startswith("{"):
        docs = []
        for i, line in enumerate(lines, start=1):
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{name}: line {i}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict):
                raise ValueError(f"{name}: line {i}: expected a JSON object")
            doc = Document(
                title=str(record.get("title", "")),
                abstract=str(record.get("abstract", "")),
                keywords=tuple(str(k) for k in record.get("keywords", [])),
            )
            docs.append((str(record.get("paper_id", f"doc-{i}")), doc))
        return docs
    title, abstract = lines[0], " ".join(lines[1:])
    return [(name, Document(title=title, abstract=abstract))]


def _open_output(path: str | None):
    if path:
        return open(path, "w", encoding="utf-8")
    return sys.stdout


def _cmd_classify(args) -> int:
    try:
        docs = _read_documents(args.input)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.server:
        return _classify_via_server(args, docs)

    try:
        opts = _options_from_args(args)
        bundle = _bundle_from_args(args)
    except (ResourceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE

    out = _open_output(args.output)
    try:
        if args.format == "tsv":
            print(TSV_HEADER, file=out)
        for paper_id, result in run_batch(docs, bundle, opts, workers=args.workers):
            if args.format == "json":
                print(result_to_json(paper_id, result), file=out)
            else:
                print(result_to_tsv(paper_id, result), file=out)
    except ValueError as exc:  # e.g. an empty document in the batch
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _classify_via_server(args, docs) -> int:
    import requests

    url = args.server.rstrip("/") + "/classify/batch"
    payload = {
        "documents": [
            {
                "paper_id": paper_id,
                "title": doc.title,
                "abstract": doc.abstract,
                "keywords": list(doc.keywords),
            }
            for paper_id, doc in docs
        ],
        "options": {
            "mode": args.mode,
            "msm": args.msm,
            "sim_threshold": args.sim_threshold,
            "top_similar": args.top_similar,
            "filter_top_n": args.filter_top_n,
            "enhancement": args.enhancement,
        },
    }
    try:
        response = requests.post(url, json=payload, timeout=300)
    except requests.RequestException as exc:
        print(f"error: cannot reach server: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if response.status_code != 200:
        print(f"error: server returned {response.status_code}: {response.text}", file=sys.stderr)
        return EXIT_RESOURCE
    out = _open_output(args.output)
    try:
        for record in response.json()["results"]:
            print(json.dumps(record, ensure_ascii=False), file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    try:
        predictions = read_topic_sets(args.predictions)
        gold = read_topic_sets(args.gold)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not predictions:
        print("error: predictions file is empty", file=sys.stderr)
        return EXIT_ID_MISMATCH

    ont = None
    if args.enrich or args.gold_enriched:
        try:
            bundle = _bundle_from_args(args)
            ont = bundle.ontology
        except ResourceError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RESOURCE

    try:
        report = evaluate_sets(
            predictions, gold, ont,
            enrich=args.enrich or args.gold_enriched,
            gold_enriched=args.gold_enriched,
        )
    except IdMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ID_MISMATCH
    except (UnknownTopicError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    out = _open_output(args.output)
    try:
        print(json.dumps(report_to_dict(report), ensure_ascii=False), file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _cmd_inspect(args) -> int:
    if args.server:
        import requests

        url = args.server.rstrip("/") + "/topics/" + requests.utils.quote(args.label)
        try:
            response = requests.get(url, timeout=30)
        except requests.RequestException as exc:
            print(f"error: cannot reach server: {exc}", file=sys.stderr)
            return EXIT_RESOURCE
        if response.status_code == 404:
            print(f"error: unknown topic label {args.label!r}", file=sys.stderr)
            return EXIT_UNKNOWN_LABEL
        if response.status_code != 200:
            print(f"error: server returned {response.status_code}", file=sys.stderr)
            return EXIT_RESOURCE
        print(json.dumps(response.json(), ensure_ascii=False, indent=2))
        return EXIT_OK

    try:
        bundle = _bundle_from_args(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    ont = bundle.ontology
    carriers = ont.topics_by_label(args.label)
    if not carriers:
        print(f"error: unknown topic label {args.label!r}", file=sys.stderr)
        return EXIT_UNKNOWN_LABEL
    cards = []
    for tid in sorted({ont.canonical(t) for t in carriers}):
        topic = ont.topics[tid]
        cards.append({
            "label": args.label,
            "canonical_label": topic.canonical_label,
            "alternate_labels": sorted(topic.alternate_labels),
            "equivalent": sorted(ont.equivalence_class(tid) - {tid}),
            "direct_supers": sorted(ont.direct_supers(tid)),
            "children": sorted(ont.direct_children(tid)),
        })
    print(json.dumps(cards if len(cards) > 1 else cards[0], ensure_ascii=False, indent=2))
    return EXIT_OK


def _cmd_build_gold(args) -> int:
    try:
        annotations = read_annotations(args.annotations)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        bundle = _bundle_from_args(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    try:
        gold = majority_gold(annotations, bundle.ontology, min_raters=args.min_raters)
    except (UnknownTopicError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    write_topic_sets(args.output, gold)
    summary = {"papers": len(gold), "output": args.output}
    if args.kappa:
        per_paper = kappa_per_paper(annotations)
        mean, std = kappa_summary(per_paper)
        summary["kappa_mean"] = mean
        summary["kappa_std"] = std
    print(json.dumps(summary, ensure_ascii=False))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    try:
        opts = _options_from_args(args)
        paths = ResourcePaths(args.ontology, args.embeddings, args.stoplist,
                              args.lexicon, args.idf)
        bundle = load_resources(paths)
    except (ResourceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    app = create_app(bundle, opts)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "classify": _cmd_classify,
        "evaluate": _cmd_evaluate,
        "inspect": _cmd_inspect,
        "build-gold": _cmd_build_gold,
        "serve": _cmd_serve,
    }
    return handlers[args.command](args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
