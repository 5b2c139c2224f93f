"""Comparison classifiers: exact matching, sliding-window embeddings, TF-IDF.

These share the pipeline's tokenization so their outputs are directly
comparable with the main classifier (the exact matcher is by construction a
subset of the syntactic matcher).
"""

from __future__ import annotations

import io
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .embeddings import EmbeddingStore, top_similar
from .ontology import Ontology, TopicId
from .pipeline import Document, ScoredTopic, document_grams, find_knee
from .textproc import (
    Token,
    default_stopwords,
    lev_similarity,
    normalize_label,
    remove_stopwords,
    similarity_length_bounds,
    tokenize,
)


@dataclass(frozen=True)
class WindowConfig:
    window_size: int = 10
    stride: int = 5
    top_k: int = 20
    sim_threshold: float = 0.6

    def __post_init__(self):
        if not 1 <= self.stride <= self.window_size:
            raise ValueError("stride must satisfy 1 <= stride <= window_size")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


class IdfTable:
    """token -> inverse document frequency, with the corpus document count.

    File format: header line ``#docs <N>``, then ``token<TAB>idf`` per line.
    """

    def __init__(self, values: dict[str, float], n_docs: int):
        for token, idf in values.items():
            if not math.isfinite(idf) or idf < 0:
                raise ValueError(f"idf for {token!r} must be finite and non-negative")
        self.values = dict(values)
        self.n_docs = n_docs

    def idf(self, token: str) -> float:
        return self.values.get(token, 0.0)

    def __len__(self) -> int:
        return len(self.values)


def load_idf(source) -> IdfTable:
    if hasattr(source, "read"):
        data = source.read()
    elif isinstance(source, str) and "\n" in source:
        data = source
    else:
        with open(source, "rb") as handle:
            data = handle.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.splitlines()
    if not lines or not lines[0].startswith("#docs"):
        raise ValueError("idf file must start with a '#docs <N>' header")
    try:
        n_docs = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError("idf file must start with a '#docs <N>' header") from None
    values: dict[str, float] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        token, _, raw = line.partition("\t")
        try:
            values[token.strip()] = float(raw)
        except ValueError:
            raise ValueError(f"line {lineno}: unparseable idf value") from None
    return IdfTable(values, n_docs)


def serialize_idf(table: IdfTable) -> str:
    out = io.StringIO()
    out.write(f"#docs {table.n_docs}\n")
    for token in sorted(table.values):
        out.write(f"{token}\t{table.values[token]!r}\n")
    return out.getvalue()


def build_idf(docs: Iterable[Document], stopwords: frozenset[str] | None = None) -> IdfTable:
    """Compute idf = ln(N / df) over a local document collection."""
    stopwords = default_stopwords() if stopwords is None else stopwords
    df: Counter[str] = Counter()
    n_docs = 0
    for doc in docs:
        n_docs += 1
        df.update({tok.surface for tok in _document_tokens(doc, stopwords)})
    values = {token: math.log(n_docs / count) for token, count in df.items()}
    return IdfTable(values, n_docs)


def classify_exact(
    doc: Document,
    ont: Ontology,
    stopwords: frozenset[str] | None = None,
    max_n: int = 3,
) -> frozenset[TopicId]:
    """Exact-equality variant of the syntactic matcher (msm = 1.0 path)."""
    found: set[TopicId] = set()
    for gram in document_grams(doc, stopwords, max_n):
        found.update(ont.topics_by_label(gram.text))
    return frozenset(ont.canonical(t) for t in found)


def _document_tokens(doc: Document, stopwords: frozenset[str] | None) -> tuple[Token, ...]:
    pieces = [doc.title, doc.abstract, *doc.keywords]
    tokens: list[Token] = []
    for piece in pieces:
        tokens.extend(tokenize(piece))
    if stopwords is not None:
        return remove_stopwords(tuple(tokens), stopwords)
    return tuple(tokens)


def token_windows(tokens: Sequence, window_size: int, stride: int) -> list[Sequence]:
    """Overlapping windows; a document no longer than one window is one window.

    Longer documents start a window at every stride multiple, keeping the
    final short windows, so every token belongs to at least one window.
    """
    n = len(tokens)
    if n == 0:
        return []
    if n <= window_size:
        return [tokens[0:n]]
    return [tokens[s : s + window_size] for s in range(0, n, stride)]


def window_topic_scores(
    windows: Sequence[Sequence[Token]],
    store: EmbeddingStore,
    ont: Ontology,
    cfg: WindowConfig = WindowConfig(),
) -> list[ScoredTopic]:
    """Additive neighbor scoring over explicit token windows.

    Each window is represented by the mean vector of its in-vocabulary
    tokens; every neighbor of that vector which is an ontology label adds
    its cosine to the label's topics. No deduplication: scores are strictly
    additive across windows and neighbor hits. frequency counts hits,
    diversity counts contributing windows.
    """
    sums: dict[TopicId, float] = {}
    hits: dict[TopicId, int] = {}
    windows_hit: dict[TopicId, set[int]] = {}
    for w_index, window in enumerate(windows):
        vectors = [v for tok in window if (v := store.vector(tok.surface)) is not None]
        if not vectors:
            continue
        mean = np.mean(vectors, axis=0)
        if not np.any(mean):
            continue
        for neighbor in top_similar(store, mean, cfg.top_k, cfg.sim_threshold):
            for tid in sorted(ont.topics_by_label(normalize_label(neighbor.token))):
                topic = ont.canonical(tid)
                sums[topic] = sums.get(topic, 0.0) + neighbor.cosine
                hits[topic] = hits.get(topic, 0) + 1
                windows_hit.setdefault(topic, set()).add(w_index)
    ranked = [
        ScoredTopic(topic, hits[topic], len(windows_hit[topic]), sums[topic])
        for topic in sums
    ]
    ranked.sort(key=lambda st: (-st.score, st.topic))
    return ranked


def classify_w2vw(
    doc: Document,
    store: EmbeddingStore,
    ont: Ontology,
    cfg: WindowConfig = WindowConfig(),
) -> list[ScoredTopic]:
    """Sliding-window embedding classifier: additive scores cut at the knee."""
    tokens = _document_tokens(doc, stopwords=None)
    windows = token_windows(tokens, cfg.window_size, cfg.stride)
    ranked = window_topic_scores(windows, store, ont, cfg)
    keep = find_knee([st.score for st in ranked])
    return ranked[:keep]


def classify_tfidf_m(
    doc: Document,
    idf: IdfTable,
    ont: Ontology,
    map_threshold: float = 0.8,
    top_terms: int = 20,
    stopwords: frozenset[str] | None = None,
) -> frozenset[TopicId]:
    """Top tf x idf terms mapped to all labels above the similarity threshold."""
    stopwords = default_stopwords() if stopwords is None else stopwords
    tf = Counter(tok.surface for tok in _document_tokens(doc, stopwords))
    scored = [(count * idf.idf(token), token) for token, count in tf.items()]
    scored = [(s, t) for s, t in scored if s > 0.0]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    top = [token for _, token in scored[:top_terms]]

    by_length: dict[int, list[str]] = {}
    for label in ont.label_index:
        by_length.setdefault(len(label), []).append(label)
    found: set[TopicId] = set()
    for term in top:
        low, high = similarity_length_bounds(len(term), map_threshold)
        for length in range(low, high + 1):
            for label in by_length.get(length, ()):
                if lev_similarity(term, label) > map_threshold:
                    found.update(ont.label_index[label])
    return frozenset(ont.canonical(t) for t in found)
