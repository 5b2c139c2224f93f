"""The classification pipeline: syntactic matcher, semantic matcher, combiner.

The syntactic path finds topics whose labels are (fuzzily) present in the
text. The semantic path extracts noun-phrase grams, walks their embedding
neighborhoods, scores candidate topics by frequency x diversity, and cuts
the ranked list at the knee of the score curve. The combiner unions the two
sets after dropping semantic topics with overly generic labels, then the
enhancement step adds super-topics.

All functions are pure over immutable resources; documents may be
classified concurrently and batch order never affects per-document output.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Sequence

import numpy as np

from .embeddings import EmbeddingStore, gram_vector, top_similar
from .ontology import Ontology, TopicId
from .postag import Chunk, Tagger, default_tagger, extract_chunks, pos_tag
from .textproc import (
    Gram,
    Token,
    default_stopwords,
    lev_similarity,
    ngrams,
    normalize_label,
    remove_stopwords,
    similarity_length_bounds,
    split_sentences,
    tokenize,
)

DIRECT_MATCH = "direct_match"
EMBEDDING_NEIGHBOR = "embedding_neighbor"

EnhancementMode = Literal["none", "direct", "all"]


@dataclass(frozen=True)
class SyntacticConfig:
    msm: float = 0.94
    max_n: int = 3

    def __post_init__(self):
        if not 0.0 < self.msm <= 1.0:
            raise ValueError("msm must be in (0, 1]")
        if self.max_n < 1:
            raise ValueError("max_n must be >= 1")


@dataclass(frozen=True)
class SemanticConfig:
    top_k: int = 10
    sim_threshold: float = 0.7

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if not -1.0 <= self.sim_threshold <= 1.0:
            raise ValueError("sim_threshold must be in [-1, 1]")


@dataclass(frozen=True)
class CombinerConfig:
    generic_filter_n: int = 3000
    enhancement: EnhancementMode = "direct"

    def __post_init__(self):
        if self.generic_filter_n < 0:
            raise ValueError("generic_filter_n must be >= 0")
        if self.enhancement not in ("none", "direct", "all"):
            raise ValueError(f"unknown enhancement mode {self.enhancement!r}")


@dataclass(frozen=True)
class PipelineConfig:
    syntactic: SyntacticConfig = field(default_factory=SyntacticConfig)
    semantic: SemanticConfig = field(default_factory=SemanticConfig)
    combiner: CombinerConfig = field(default_factory=CombinerConfig)


@dataclass(frozen=True)
class Document:
    title: str = ""
    abstract: str = ""
    keywords: tuple[str, ...] = ()

    def is_empty(self) -> bool:
        return not (self.title.strip() or self.abstract.strip() or any(k.strip() for k in self.keywords))


@dataclass(frozen=True)
class IdentificationEvent:
    """One (gram occurrence -> topic) hit inside the semantic module."""

    topic: TopicId
    source_gram: str
    occurrence: int
    via: str
    neighbor_cosine: float | None = None


@dataclass(frozen=True)
class ScoredTopic:
    topic: TopicId
    frequency: int
    diversity: int
    score: float
    events: tuple[IdentificationEvent, ...] = ()


@dataclass(frozen=True)
class ClassificationResult:
    syntactic: frozenset[TopicId]
    semantic: tuple[ScoredTopic, ...]
    union: frozenset[TopicId]
    enhancement: frozenset[TopicId]
    explanations: dict[TopicId, tuple[IdentificationEvent, ...]]


def document_sentences(doc: Document) -> list[str]:
    """Title and abstract split on sentence enders; each keyword is its own piece."""
    pieces = split_sentences(doc.title) + split_sentences(doc.abstract)
    pieces.extend(k for k in doc.keywords if k.strip())
    return pieces


def document_grams(
    doc: Document,
    stopwords: frozenset[str] | None = None,
    max_n: int = 3,
) -> list[Gram]:
    """Stopword-free grams over the document, never crossing sentence bounds."""
    stopwords = default_stopwords() if stopwords is None else stopwords
    grams: list[Gram] = []
    for sentence in document_sentences(doc):
        kept = remove_stopwords(tokenize(sentence), stopwords)
        grams.extend(ngrams(kept, max_n))
    return grams


class LabelMatcher:
    """Fuzzy gram-to-label matching with an exact-lookup fast path.

    Fuzzy candidates are pruned by the length window implied by the
    similarity threshold before running the edit-distance DP.
    """

    def __init__(self, ont: Ontology, msm: float):
        self.ont = ont
        self.msm = msm
        self._by_length: dict[int, list[str]] = {}
        for label in ont.label_index:
            self._by_length.setdefault(len(label), []).append(label)

    def matching_topics(self, text: str) -> set[TopicId]:
        text = normalize_label(text)
        if not text:
            return set()
        hits: set[TopicId] = set()
        hits.update(self.ont.label_index.get(text, ()))
        if self.msm < 1.0:
            low, high = similarity_length_bounds(len(text), self.msm)
            for length in range(low, high + 1):
                for label in self._by_length.get(length, ()):
                    if label != text and lev_similarity(text, label) >= self.msm:
                        hits.update(self.ont.label_index[label])
        return hits


def classify_syntactic(
    doc: Document,
    ont: Ontology,
    cfg: SyntacticConfig = SyntacticConfig(),
    stopwords: frozenset[str] | None = None,
) -> frozenset[TopicId]:
    """Topics whose labels match a document gram at similarity >= msm, canonicalized."""
    matcher = LabelMatcher(ont, cfg.msm)
    found: set[TopicId] = set()
    for gram in document_grams(doc, stopwords, cfg.max_n):
        found.update(matcher.matching_topics(gram.text))
    return frozenset(ont.canonical(t) for t in found)


def decompose_chunk(chunk: Chunk, max_n: int = 3) -> list[Gram]:
    tokens = tuple(Token(surface, i) for i, surface in enumerate(chunk.tokens))
    return ngrams(tokens, max_n)


def extract_entities(doc: Document, tagger: Tagger | None = None) -> list[Gram]:
    """Noun-phrase grams: tag, chunk, then decompose chunks into 1..3-grams.

    Author keywords are already noun phrases, so each keyword bypasses
    tagging and is treated as one pre-made chunk.
    """
    tagger = tagger or default_tagger()
    grams: list[Gram] = []
    for sentence in split_sentences(doc.title) + split_sentences(doc.abstract):
        tagged = pos_tag(tokenize(sentence), tagger)
        for chunk in extract_chunks(tagged):
            grams.extend(decompose_chunk(chunk))
    for keyword in doc.keywords:
        tokens = tokenize(keyword)
        if tokens:
            chunk = Chunk(tuple(t.surface for t in tokens), 0, len(tokens))
            grams.extend(decompose_chunk(chunk))
    return grams


def identify_concepts(
    grams: Sequence[Gram],
    store: EmbeddingStore,
    ont: Ontology,
    cfg: SemanticConfig = SemanticConfig(),
) -> list[IdentificationEvent]:
    """Per gram occurrence: direct label matches plus embedding-neighbor matches.

    A gram with no vector (all tokens out of vocabulary) can still produce
    direct matches. Neighbor tokens are matched to labels after mapping
    underscores back to spaces.
    """
    events: list[IdentificationEvent] = []
    for occurrence, gram in enumerate(grams):
        text = normalize_label(gram.text)
        for tid in sorted(ont.topics_by_label(text)):
            events.append(
                IdentificationEvent(ont.canonical(tid), text, occurrence, DIRECT_MATCH)
            )
        vec = gram_vector(store, text)
        if vec is None or not np.any(vec):
            continue
        joined = text.replace(" ", "_")
        for neighbor in top_similar(store, vec, cfg.top_k, cfg.sim_threshold, exclude=joined):
            for tid in sorted(ont.topics_by_label(normalize_label(neighbor.token))):
                events.append(
                    IdentificationEvent(
                        ont.canonical(tid), text, occurrence,
                        EMBEDDING_NEIGHBOR, neighbor.cosine,
                    )
                )
    return events


def rank_concepts(events: Iterable[IdentificationEvent]) -> list[ScoredTopic]:
    """Score each topic as frequency x diversity, promoting direct mentions.

    frequency counts identification events, diversity counts distinct source
    grams. Any topic with at least one direct match is promoted to the
    maximum score found. Descending score, ties broken by label.
    """
    per_topic: dict[TopicId, list[IdentificationEvent]] = {}
    for event in events:
        per_topic.setdefault(event.topic, []).append(event)
    if not per_topic:
        return []
    scored: list[ScoredTopic] = []
    for topic, topic_events in per_topic.items():
        frequency = len(topic_events)
        diversity = len({e.source_gram for e in topic_events})
        scored.append(
            ScoredTopic(topic, frequency, diversity, float(frequency * diversity),
                        tuple(topic_events))
        )
    maximum = max(st.score for st in scored)
    scored = [
        replace(st, score=maximum)
        if any(e.via == DIRECT_MATCH for e in st.events) else st
        for st in scored
    ]
    scored.sort(key=lambda st: (-st.score, st.topic))
    return scored


def find_knee(scores: Sequence[float]) -> int:
    """How many entries of a descending score curve to keep (knee index + 1).

    Kneedle-style: normalize rank and score to [0, 1] and examine the
    difference d(i) = y(i) - (1 - x(i)) against the descending diagonal.
    Positive local maxima of d mark concave knees (score cliffs) and take
    priority; when the curve is purely convex (long tail) the deepest local
    minimum marks the elbow. Degenerate curves (fewer than 3 distinct
    scores, or all differences within 1e-9 of the diagonal) keep everything,
    biasing toward recall.
    """
    n = len(scores)
    if n == 0:
        return 0
    if n < 3 or len(set(scores)) < 3:
        return n
    lo, hi = min(scores), max(scores)
    y = [(s - lo) / (hi - lo) for s in scores]
    d = [y[i] - 1.0 + i / (n - 1) for i in range(n)]
    if all(abs(v) <= 1e-9 for v in d):
        return n
    maxima = [i for i in range(1, n - 1) if d[i] >= d[i - 1] and d[i] >= d[i + 1]]
    positive = [i for i in maxima if d[i] > 1e-9]
    if positive:
        return max(positive, key=lambda i: (d[i], -i)) + 1
    minima = [i for i in range(1, n - 1) if d[i] <= d[i - 1] and d[i] <= d[i + 1]]
    negative = [i for i in minima if d[i] < -1e-9]
    if negative:
        return max(negative, key=lambda i: (-d[i], -i)) + 1
    return n


def classify_semantic(
    doc: Document,
    store: EmbeddingStore,
    ont: Ontology,
    cfg: SemanticConfig = SemanticConfig(),
    tagger: Tagger | None = None,
) -> list[ScoredTopic]:
    """Entity extraction -> concept identification -> ranking -> knee selection."""
    grams = extract_entities(doc, tagger)
    ranked = rank_concepts(identify_concepts(grams, store, ont, cfg))
    keep = find_knee([st.score for st in ranked])
    return ranked[:keep]


def combine(
    syn: frozenset[TopicId] | set[TopicId],
    sem: Sequence[ScoredTopic],
    store: EmbeddingStore,
    ont: Ontology,
    cfg: CombinerConfig = CombinerConfig(),
) -> ClassificationResult:
    """Union the two modules, dropping generic-labeled semantic topics.

    A semantic topic whose canonical label (underscore-joined) sits among
    the first generic_filter_n most frequent vocabulary tokens is dropped
    from the union; the same topic found syntactically always survives. The
    reported semantic list itself is not filtered.
    """
    surviving: set[TopicId] = set()
    for st in sem:
        rank = store.frequency_rank(st.topic.replace(" ", "_"))
        if rank is not None and rank < cfg.generic_filter_n:
            continue
        surviving.add(st.topic)
    union = frozenset(syn) | surviving
    explanations = {st.topic: st.events for st in sem}
    return ClassificationResult(
        syntactic=frozenset(syn),
        semantic=tuple(sem),
        union=union,
        enhancement=frozenset(),
        explanations=explanations,
    )


def enhance(
    topics: Iterable[TopicId],
    ont: Ontology,
    mode: EnhancementMode = "direct",
) -> frozenset[TopicId]:
    """Super-topics inferred from a topic set, excluding the set itself."""
    topics = frozenset(topics)
    if mode == "none":
        return frozenset()
    inferred: set[TopicId] = set()
    for topic in topics:
        if mode == "direct":
            inferred.update(ont.direct_supers(topic))
        elif mode == "all":
            inferred.update(ont.ancestors(topic))
        else:
            raise ValueError(f"unknown enhancement mode {mode!r}")
    return frozenset(inferred - topics)


def classify(
    doc: Document,
    ont: Ontology,
    store: EmbeddingStore,
    config: PipelineConfig = PipelineConfig(),
    stopwords: frozenset[str] | None = None,
    tagger: Tagger | None = None,
) -> ClassificationResult:
    """The full pipeline: syntactic + semantic -> combine -> enhance."""
    if doc.is_empty():
        raise ValueError("empty input")
    syn = classify_syntactic(doc, ont, config.syntactic, stopwords)
    sem = classify_semantic(doc, store, ont, config.semantic, tagger)
    result = combine(syn, sem, store, ont, config.combiner)
    enhancement = enhance(result.union, ont, config.combiner.enhancement)
    return replace(result, enhancement=enhancement)
