"""Mode dispatch and result serialization shared by the CLI and the service."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .baselines import WindowConfig, classify_exact, classify_tfidf_m, classify_w2vw
from .pipeline import (
    ClassificationResult,
    CombinerConfig,
    Document,
    ScoredTopic,
    SemanticConfig,
    SyntacticConfig,
    classify_semantic,
    classify_syntactic,
    combine,
    enhance,
)
from .resources import ResourceBundle, ResourceError

MODES = ("syntactic", "semantic", "both", "intersection", "exact", "w2vw", "tfidf")


@dataclass(frozen=True)
class RunOptions:
    mode: str = "both"
    syntactic: SyntacticConfig = field(default_factory=SyntacticConfig)
    semantic: SemanticConfig = field(default_factory=SemanticConfig)
    combiner: CombinerConfig = field(default_factory=CombinerConfig)
    window: WindowConfig = field(default_factory=WindowConfig)
    map_threshold: float = 0.8
    top_terms: int = 20

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")


def mode_requirements(mode: str) -> tuple[bool, bool]:
    """(needs_embeddings, needs_idf) for a pipeline mode."""
    return mode in ("semantic", "both", "intersection", "w2vw"), mode == "tfidf"


def run_document(doc: Document, bundle: ResourceBundle, opts: RunOptions) -> ClassificationResult:
    """Classify one document under the selected mode.

    The ``union`` field carries the mode's headline topic set: the module's
    own output for single-module modes, the generic-filtered union for
    ``both``, and the syntactic/semantic intersection for ``intersection``.
    Enhancement always applies to that set.
    """
    if doc.is_empty():
        raise ValueError("empty input")
    ont, store = bundle.ontology, bundle.store
    needs_store, needs_idf = mode_requirements(opts.mode)
    if needs_store and store is None:
        raise ResourceError(f"mode {opts.mode!r} requires embeddings")
    if needs_idf and bundle.idf is None:
        raise ResourceError("mode 'tfidf' requires an idf table")

    syn: frozenset[str] = frozenset()
    sem: tuple[ScoredTopic, ...] = ()
    if opts.mode in ("syntactic", "both", "intersection"):
        syn = classify_syntactic(doc, ont, opts.syntactic, bundle.stopwords)
    if opts.mode in ("semantic", "both", "intersection"):
        sem = tuple(classify_semantic(doc, store, ont, opts.semantic, bundle.tagger))

    if opts.mode == "both":
        result = combine(syn, sem, store, ont, opts.combiner)
    elif opts.mode == "intersection":
        union = syn & frozenset(st.topic for st in sem)
        result = ClassificationResult(
            syn, sem, union, frozenset(), {st.topic: st.events for st in sem}
        )
    elif opts.mode == "syntactic":
        result = ClassificationResult(syn, (), syn, frozenset(), {})
    elif opts.mode == "semantic":
        union = frozenset(st.topic for st in sem)
        result = ClassificationResult(
            frozenset(), sem, union, frozenset(), {st.topic: st.events for st in sem}
        )
    elif opts.mode == "exact":
        matched = classify_exact(doc, ont, bundle.stopwords, opts.syntactic.max_n)
        result = ClassificationResult(matched, (), matched, frozenset(), {})
    elif opts.mode == "w2vw":
        ranked = tuple(classify_w2vw(doc, store, ont, opts.window))
        union = frozenset(st.topic for st in ranked)
        result = ClassificationResult(frozenset(), ranked, union, frozenset(), {})
    else:  # tfidf
        matched = classify_tfidf_m(
            doc, bundle.idf, ont, opts.map_threshold, opts.top_terms, bundle.stopwords
        )
        result = ClassificationResult(frozenset(), (), matched, frozenset(), {})

    enhancement = enhance(result.union, ont, opts.combiner.enhancement)
    return ClassificationResult(
        result.syntactic, result.semantic, result.union, enhancement, result.explanations
    )


def run_batch(
    docs: Iterable[tuple[str, Document]],
    bundle: ResourceBundle,
    opts: RunOptions,
    workers: int = 1,
) -> Iterator[tuple[str, ClassificationResult]]:
    """Classify a stream of (paper_id, document); output order equals input order."""
    docs = list(docs)
    if workers <= 1:
        for paper_id, doc in docs:
            yield paper_id, run_document(doc, bundle, opts)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = pool.map(lambda pair: run_document(pair[1], bundle, opts), docs)
        for (paper_id, _), result in zip(docs, results):
            yield paper_id, result


def _event_to_dict(event) -> dict:
    out = {
        "source_gram": event.source_gram,
        "occurrence": event.occurrence,
        "via": event.via,
    }
    if event.neighbor_cosine is not None:
        out["cosine"] = event.neighbor_cosine
    return out


def result_to_dict(paper_id: str, result: ClassificationResult) -> dict:
    """Schema-stable JSON view: fixed keys, sorted topic arrays."""
    return {
        "paper_id": paper_id,
        "syntactic": sorted(result.syntactic),
        "semantic": [
            {
                "topic": st.topic,
                "score": st.score,
                "frequency": st.frequency,
                "diversity": st.diversity,
            }
            for st in result.semantic
        ],
        "union": sorted(result.union),
        "enhancement": sorted(result.enhancement),
        "explanations": {
            topic: [_event_to_dict(e) for e in result.explanations[topic]]
            for topic in sorted(result.explanations)
        },
    }


def result_to_json(paper_id: str, result: ClassificationResult) -> str:
    return json.dumps(result_to_dict(paper_id, result), ensure_ascii=False)


TSV_HEADER = "paper_id\tsyntactic\tsemantic\tunion\tenhancement"


def result_to_tsv(paper_id: str, result: ClassificationResult) -> str:
    semantic = "; ".join(f"{st.topic}:{st.score:g}" for st in result.semantic)
    return "\t".join(
        [
            paper_id,
            "; ".join(sorted(result.syntactic)),
            semantic,
            "; ".join(sorted(result.union)),
            "; ".join(sorted(result.enhancement)),
        ]
    )
