"""FastAPI service wrapping the classification pipeline.

Resources (ontology, embeddings, ...) are loaded once at startup and shared
read-only across requests; classification itself is a pure function, so the
endpoints are safe under concurrent load.

Run via ``ontotagger serve --ontology ... [--embeddings ...]`` or point
uvicorn at the factory: ``uvicorn --factory ontotagger.service.app:app_from_env``
with ONTOTAGGER_ONTOLOGY (and friends) in the environment.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException

from ..baselines import WindowConfig
from ..evaluation import IdMismatchError, evaluate_sets, report_to_dict
from ..ontology import UnknownTopicError
from ..pipeline import CombinerConfig, Document, SemanticConfig, SyntacticConfig
from ..resources import ResourceBundle, ResourceError, ResourcePaths, load_resources
from ..runner import RunOptions, result_to_dict, run_document
from .schemas import (
    BatchClassifyRequest,
    BatchClassifyResponse,
    ClassificationOut,
    ClassifyRequest,
    EvalReportOut,
    EvaluateRequest,
    HealthOut,
    TopicCardOut,
)


def _options_from_schema(opts) -> RunOptions:
    return RunOptions(
        mode=opts.mode,
        syntactic=SyntacticConfig(msm=opts.msm, max_n=opts.max_n),
        semantic=SemanticConfig(top_k=opts.top_similar, sim_threshold=opts.sim_threshold),
        combiner=CombinerConfig(generic_filter_n=opts.filter_top_n, enhancement=opts.enhancement),
        window=WindowConfig(window_size=opts.window_size, stride=opts.window_stride,
                            top_k=opts.window_top, sim_threshold=opts.window_threshold),
        map_threshold=opts.map_threshold,
        top_terms=opts.top_terms,
    )


def create_app(bundle: ResourceBundle, defaults: RunOptions | None = None) -> FastAPI:
    app = FastAPI(
        title="ontotagger",
        description="Ontology-driven research-topic annotation service",
        version="0.1.0",
    )
    app.state.bundle = bundle
    app.state.defaults = defaults or RunOptions()

    def _classify_one(document, options) -> dict:
        doc = Document(
            title=document.title,
            abstract=document.abstract,
            keywords=tuple(document.keywords),
        )
        try:
            result = run_document(doc, bundle, options)
        except ResourceError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return result_to_dict(document.paper_id or "", result)

    @app.get("/health", response_model=HealthOut)
    def health() -> HealthOut:
        store, idf = bundle.store, bundle.idf
        return HealthOut(
            status="ok",
            topics=len(bundle.ontology),
            embedding_tokens=len(store) if store is not None else None,
            embedding_dim=store.dim if store is not None else None,
            idf_tokens=len(idf) if idf is not None else None,
        )

    @app.post("/classify", response_model=ClassificationOut)
    def classify_endpoint(request: ClassifyRequest) -> dict:
        return _classify_one(request.document, _options_from_schema(request.options))

    @app.post("/classify/batch", response_model=BatchClassifyResponse)
    def classify_batch(request: BatchClassifyRequest) -> dict:
        options = _options_from_schema(request.options)
        return {"results": [_classify_one(doc, options) for doc in request.documents]}

    @app.post("/evaluate", response_model=EvalReportOut)
    def evaluate_endpoint(request: EvaluateRequest) -> dict:
        predictions = {p.paper_id: frozenset(p.topics) for p in request.predictions}
        gold = {g.paper_id: frozenset(g.topics) for g in request.gold}
        if not predictions:
            raise HTTPException(status_code=422, detail="no predictions to evaluate")
        try:
            report = evaluate_sets(
                predictions, gold, bundle.ontology,
                enrich=request.enrich or request.gold_enriched,
                gold_enriched=request.gold_enriched,
            )
        except IdMismatchError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except (UnknownTopicError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return report_to_dict(report)

    @app.get("/topics/{label}", response_model=TopicCardOut)
    def topic_card(label: str) -> dict:
        ont = bundle.ontology
        carriers = ont.topics_by_label(label)
        if not carriers:
            raise HTTPException(status_code=404, detail=f"unknown topic label {label!r}")
        tid = sorted(ont.canonical(t) for t in carriers)[0]
        topic = ont.topics[tid]
        return {
            "label": label,
            "canonical_label": topic.canonical_label,
            "alternate_labels": sorted(topic.alternate_labels),
            "equivalent": sorted(ont.equivalence_class(tid) - {tid}),
            "direct_supers": sorted(ont.direct_supers(tid)),
            "children": sorted(ont.direct_children(tid)),
        }

    return app


def app_from_env() -> FastAPI:
    """Build the app from ONTOTAGGER_* environment variables (uvicorn --factory)."""
    paths = ResourcePaths(
        ontology=os.environ.get("ONTOTAGGER_ONTOLOGY"),
        embeddings=os.environ.get("ONTOTAGGER_EMBEDDINGS"),
        stoplist=os.environ.get("ONTOTAGGER_STOPLIST"),
        lexicon=os.environ.get("ONTOTAGGER_LEXICON"),
        idf=os.environ.get("ONTOTAGGER_IDF"),
    )
    return create_app(load_resources(paths))
