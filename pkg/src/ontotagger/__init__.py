"""Ontology-driven research-topic annotation for scholarly documents."""

from .baselines import IdfTable, WindowConfig, classify_exact, classify_tfidf_m, classify_w2vw
from .embeddings import EmbeddingStore, cosine, gram_vector, load_embeddings, top_similar
from .evaluation import (
    EvalReport,
    aggregate,
    enrich_with_supers,
    evaluate_sets,
    fleiss_kappa,
    majority_gold,
    paper_pr_re,
)
from .ontology import Ontology, Topic, load_ontology, serialize_ontology
from .pipeline import (
    ClassificationResult,
    CombinerConfig,
    Document,
    IdentificationEvent,
    PipelineConfig,
    ScoredTopic,
    SemanticConfig,
    SyntacticConfig,
    classify,
    classify_semantic,
    classify_syntactic,
    combine,
    enhance,
    extract_entities,
    find_knee,
    identify_concepts,
    rank_concepts,
)
from .textproc import Gram, lev_similarity, ngrams, normalize_label, remove_stopwords, tokenize

__version__ = "0.1.0"

__all__ = [
    "ClassificationResult",
    "CombinerConfig",
    "Document",
    "EmbeddingStore",
    "EvalReport",
    "Gram",
    "IdentificationEvent",
    "IdfTable",
    "Ontology",
    "PipelineConfig",
    "ScoredTopic",
    "SemanticConfig",
    "SyntacticConfig",
    "Topic",
    "WindowConfig",
    "aggregate",
    "classify",
    "classify_exact",
    "classify_semantic",
    "classify_syntactic",
    "classify_tfidf_m",
    "classify_w2vw",
    "combine",
    "cosine",
    "enhance",
    "enrich_with_supers",
    "evaluate_sets",
    "extract_entities",
    "find_knee",
    "fleiss_kappa",
    "gram_vector",
    "identify_concepts",
    "lev_similarity",
    "load_embeddings",
    "load_ontology",
    "majority_gold",
    "ngrams",
    "normalize_label",
    "paper_pr_re",
    "rank_concepts",
    "remove_stopwords",
    "serialize_ontology",
    "tokenize",
    "top_similar",
    "__version__",
]
