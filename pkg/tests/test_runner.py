"""Mode dispatch tests: every mode routed through the shared runner."""

from __future__ import annotations

import pytest

from ontotagger import Document, load_embeddings, load_ontology
from ontotagger.baselines import IdfTable
from ontotagger.postag import default_tagger
from ontotagger.resources import ResourceBundle, ResourceError
from ontotagger.runner import MODES, RunOptions, mode_requirements, run_document
from ontotagger.textproc import default_stopwords

ONT = load_ontology(
    "computing,superTopicOf,databases\n"
    "computing,superTopicOf,privacy\n"
    "computing,superTopicOf,social media\n"
)
STORE = load_embeddings(
    "3 2\n"
    "privacy 1.0 0.0\n"
    "social_media 0.8 0.6\n"
    "databases 0.0 1.0\n"
)
DOC = Document(
    title="Privacy in databases",
    abstract="Privacy matters. Database systems store private data.",
    keywords=("privacy",),
)


def bundle(store=STORE, idf=None) -> ResourceBundle:
    return ResourceBundle(
        ontology=ONT,
        stopwords=default_stopwords(),
        tagger=default_tagger(),
        store=store,
        idf=idf,
    )


def test_unknown_mode_rejected():
    with pytest.raises(ValueError, match="unknown mode"):
        RunOptions(mode="bogus")


def test_mode_requirements():
    assert mode_requirements("syntactic") == (False, False)
    assert mode_requirements("both") == (True, False)
    assert mode_requirements("w2vw") == (True, False)
    assert mode_requirements("tfidf") == (False, True)


def test_syntactic_mode_union_is_syntactic_set():
    result = run_document(DOC, bundle(store=None), RunOptions(mode="syntactic"))
    assert result.union == result.syntactic
    assert {"privacy", "databases"} <= result.union
    assert result.semantic == ()


def test_exact_mode_misses_fuzzy_variants():
    result = run_document(DOC, bundle(store=None), RunOptions(mode="exact"))
    assert "privacy" in result.union
    assert "databases" in result.union        # literal plural in the title
    syntactic = run_document(DOC, bundle(store=None), RunOptions(mode="syntactic"))
    assert result.union <= syntactic.union


def test_semantic_mode_union_matches_selected_topics():
    result = run_document(DOC, bundle(), RunOptions(mode="semantic"))
    assert result.union == {st.topic for st in result.semantic}
    assert "social media" in result.union     # neighbor of "privacy" at 0.8
    assert result.explanations.keys() == {st.topic for st in result.semantic}


def test_both_mode_applies_generic_filter():
    # "privacy" is vocabulary rank 0, so the semantic contribution is filtered,
    # but the syntactic match keeps it in the union
    result = run_document(DOC, bundle(), RunOptions(mode="both"))
    assert "privacy" in result.syntactic
    assert "privacy" in result.union
    # here "privacy" arrives only as an embedding neighbor of "social media",
    # so the rank-0 generic filter drops it from the union
    semantic_only = run_document(
        Document(title="Social media platforms"), bundle(), RunOptions(mode="both"),
    )
    assert "privacy" not in semantic_only.syntactic
    assert "privacy" in {st.topic for st in semantic_only.semantic}
    assert "privacy" not in semantic_only.union


def test_intersection_mode():
    result = run_document(DOC, bundle(), RunOptions(mode="intersection"))
    sem_topics = {st.topic for st in result.semantic}
    assert result.union == result.syntactic & sem_topics


def test_w2vw_mode():
    result = run_document(DOC, bundle(), RunOptions(mode="w2vw"))
    assert result.syntactic == frozenset()
    assert result.union == {st.topic for st in result.semantic}
    assert "privacy" in result.union


def test_tfidf_mode():
    idf = IdfTable({"privacy": 2.0, "databases": 1.5}, 50)
    result = run_document(DOC, bundle(idf=idf), RunOptions(mode="tfidf"))
    assert {"privacy", "databases"} <= result.union


def test_missing_store_raises_resource_error():
    for mode in ("semantic", "both", "intersection", "w2vw"):
        with pytest.raises(ResourceError):
            run_document(DOC, bundle(store=None), RunOptions(mode=mode))


def test_missing_idf_raises_resource_error():
    with pytest.raises(ResourceError):
        run_document(DOC, bundle(), RunOptions(mode="tfidf"))


def test_enhancement_applied_per_mode():
    for mode in MODES:
        if mode == "tfidf":
            opts = RunOptions(mode=mode)
            result = run_document(DOC, bundle(idf=IdfTable({"privacy": 2.0}, 5)), opts)
        else:
            result = run_document(DOC, bundle(), RunOptions(mode=mode))
        if result.union:
            assert result.enhancement == {"computing"} - result.union
        assert result.enhancement.isdisjoint(result.union)


def test_empty_document_rejected():
    with pytest.raises(ValueError, match="empty input"):
        run_document(Document(), bundle(), RunOptions(mode="syntactic"))
