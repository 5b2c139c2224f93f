"""Loading and bundling the classifier's file-backed resources."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .baselines import IdfTable, load_idf
from .embeddings import EmbeddingStore, load_embeddings
from .ontology import Ontology, OntologyError, load_ontology
from .postag import LexiconTagger, Tagger, default_tagger, load_lexicon
from .textproc import default_stopwords, load_stopwords


class ResourceError(Exception):
    """A resource file is missing, unreadable, or fails validation."""


@dataclass(frozen=True)
class ResourcePaths:
    ontology: str | None = None
    embeddings: str | None = None
    stoplist: str | None = None
    lexicon: str | None = None
    idf: str | None = None


@dataclass
class ResourceBundle:
    ontology: Ontology
    stopwords: frozenset[str]
    tagger: Tagger
    store: EmbeddingStore | None = None
    idf: IdfTable | None = None


def _check_exists(kind: str, path: str) -> str:
    if not Path(path).is_file():
        raise ResourceError(f"{kind} file not found: {path}")
    return path


def load_resources(
    paths: ResourcePaths,
    require_embeddings: bool = False,
    require_idf: bool = False,
) -> ResourceBundle:
    """Load everything the requested pipeline modes need.

    The ontology is always required; embeddings and the idf table only when
    a mode needs them. Any parse/validation failure surfaces as
    ResourceError with the offending file named.
    """
    if not paths.ontology:
        raise ResourceError("an ontology file is required (--ontology)")
    try:
        ontology = load_ontology(_check_exists("ontology", paths.ontology))
    except OntologyError as exc:
        raise ResourceError(f"ontology {paths.ontology}: {exc}") from exc

    if paths.stoplist:
        try:
            stopwords = load_stopwords(_check_exists("stoplist", paths.stoplist))
        except OSError as exc:
            raise ResourceError(f"stoplist {paths.stoplist}: {exc}") from exc
    else:
        stopwords = default_stopwords()

    if paths.lexicon:
        try:
            tagger: Tagger = LexiconTagger(load_lexicon(_check_exists("lexicon", paths.lexicon)))
        except OSError as exc:
            raise ResourceError(f"lexicon {paths.lexicon}: {exc}") from exc
    else:
        tagger = default_tagger()

    store = None
    if paths.embeddings:
        try:
            store = load_embeddings(_check_exists("embeddings", paths.embeddings))
        except ValueError as exc:
            raise ResourceError(f"embeddings {paths.embeddings}: {exc}") from exc
    elif require_embeddings:
        raise ResourceError("this mode requires embeddings (--embeddings)")

    idf = None
    if paths.idf:
        try:
            idf = load_idf(_check_exists("idf table", paths.idf))
        except ValueError as exc:
            raise ResourceError(f"idf table {paths.idf}: {exc}") from exc
    elif require_idf:
        raise ResourceError("this mode requires an idf table (--idf)")

    return ResourceBundle(ontology, stopwords, tagger, store, idf)
