"""Embedding store tests with a brute-force cosine oracle for neighbor search."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from ontotagger.embeddings import (
    EmbeddingFormatError,
    EmbeddingStore,
    cosine,
    gram_vector,
    load_embeddings,
    serialize_embeddings,
    top_similar,
)
from ontotagger.textproc import Gram


def make_store(entries: list[tuple[str, list[float]]]) -> EmbeddingStore:
    dim = len(entries[0][1]) if entries else 0
    lines = [f"{len(entries)} {dim}"]
    for token, vec in entries:
        lines.append(token + " " + " ".join(repr(float(x)) for x in vec))
    return load_embeddings("\n".join(lines) + "\n")


def oracle_ranking(store: EmbeddingStore, query, threshold, exclude=None):
    """Independent full scan: cosine via explicit sums, sort by (-cos, ordinal)."""
    scored = []
    for ordinal, token in enumerate(store.tokens):
        if token == exclude:
            continue
        vec = store.matrix[ordinal]
        dot = sum(float(a) * float(b) for a, b in zip(query, vec))
        nq = math.sqrt(sum(float(a) ** 2 for a in query))
        nv = math.sqrt(sum(float(b) ** 2 for b in vec))
        if nv == 0.0:
            continue
        sim = dot / (nq * nv)
        if sim > threshold:
            scored.append((sim, ordinal, token))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return scored


class TestLoad:
    def test_two_rows(self):
        store = make_store([("alpha", [1.0, 0.0, 0.0]), ("beta", [0.0, 1.0, 0.0])])
        assert store.dim == 3
        assert len(store) == 2
        assert list(store.vector("alpha")) == [1.0, 0.0, 0.0]

    def test_row_arity_error_names_line(self):
        with pytest.raises(EmbeddingFormatError) as err:
            load_embeddings("2 3\nalpha 1.0 2.0 3.0\nbeta 1.0 2.0\n")
        assert err.value.line == 3

    def test_empty_store(self):
        store = load_embeddings("0 128\n")
        assert len(store) == 0
        assert store.vector("anything") is None
        assert store.frequency_rank("anything") is None

    def test_duplicate_token_rejected(self):
        with pytest.raises(EmbeddingFormatError, match="duplicate"):
            load_embeddings("2 2\nalpha 1 2\nalpha 3 4\n")

    def test_count_mismatch_rejected(self):
        with pytest.raises(EmbeddingFormatError, match="count"):
            load_embeddings("3 2\nalpha 1 2\nbeta 3 4\n")

    def test_bad_header(self):
        with pytest.raises(EmbeddingFormatError):
            load_embeddings("not a header\n")


class TestGramVector:
    def test_joined_entry_preferred_over_average(self):
        store = make_store([
            ("web", [1.0, 0.0]),
            ("application", [0.0, 1.0]),
            ("web_application", [9.0, 9.0]),
        ])
        gram = Gram("web application", 2, 0, 2)
        assert list(gram_vector(store, gram)) == [9.0, 9.0]

    def test_average_fallback_componentwise(self):
        store = make_store([("foo", [1.0, 3.0]), ("bar", [3.0, 5.0])])
        vec = gram_vector(store, Gram("foo bar", 2, 0, 2))
        expected = [(1.0 + 3.0) / 2, (3.0 + 5.0) / 2]
        assert np.allclose(vec, expected, atol=1e-9)

    def test_partial_oov_average(self):
        store = make_store([("foo", [2.0, 4.0])])
        vec = gram_vector(store, "foo missing")
        assert list(vec) == [2.0, 4.0]

    def test_all_oov_absent(self):
        store = make_store([("foo", [1.0, 0.0])])
        assert gram_vector(store, Gram("bar baz", 2, 0, 2)) is None

    def test_random_averages_match_mean(self):
        rng = random.Random(3)
        for _ in range(50):
            dim = rng.randint(1, 6)
            a = [rng.uniform(-2, 2) for _ in range(dim)]
            b = [rng.uniform(-2, 2) for _ in range(dim)]
            store = make_store([("aa", a), ("bb", b)])
            vec = gram_vector(store, "aa bb")
            for i in range(dim):
                assert abs(vec[i] - (a[i] + b[i]) / 2) <= 1e-9


class TestCosine:
    def test_self(self):
        u = np.array([1.0, 2.0, -3.0])
        assert cosine(u, u) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_negation(self):
        u = np.array([0.5, -1.5])
        assert cosine(u, -u) == pytest.approx(-1.0, abs=1e-12)

    def test_zero_norm_rejected(self):
        with pytest.raises(ValueError, match="zero-norm"):
            cosine(np.zeros(3), np.ones(3))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cosine(np.ones(2), np.ones(3))


class TestTopSimilar:
    def test_planted_neighbor(self):
        store = make_store([
            ("query", [1.0, 0.0]),
            ("close", [0.9, math.sqrt(1 - 0.81)]),
            ("far1", [0.3, 0.95]),
            ("far2", [-1.0, 0.0]),
        ])
        got = top_similar(store, store.vector("query"), k=10, threshold=0.7, exclude="query")
        assert [w.token for w in got] == ["close"]
        assert got[0].cosine == pytest.approx(0.9, abs=1e-9)

    def test_all_below_threshold(self):
        store = make_store([("a", [1.0, 0.0]), ("b", [0.0, 1.0])])
        assert top_similar(store, np.array([0.7, 0.7]), k=5, threshold=0.99) == []

    def test_truncates_to_k_by_ranking(self):
        rng = random.Random(11)
        entries = [(f"t{i}", [rng.uniform(-1, 1) for _ in range(4)]) for i in range(40)]
        store = make_store(entries)
        query = np.array([0.5, 0.1, -0.2, 0.8])
        got = top_similar(store, query, k=10, threshold=0.0)
        expected = oracle_ranking(store, query, threshold=0.0)[:10]
        assert [w.token for w in got] == [t for _, _, t in expected]
        for word, (sim, _, _) in zip(got, expected):
            assert word.cosine == pytest.approx(sim, abs=1e-9)

    def test_full_ranking_matches_oracle(self):
        rng = random.Random(23)
        for trial in range(10):
            n = rng.randint(1, 60)
            dim = rng.randint(1, 5)
            entries = [(f"w{i}", [rng.uniform(-1, 1) for _ in range(dim)]) for i in range(n)]
            store = make_store(entries)
            query = np.array([rng.uniform(-1, 1) for _ in range(dim)]) + 1e-3
            got = top_similar(store, query, k=10**9, threshold=-1.0)
            expected = oracle_ranking(store, query, threshold=-1.0)
            assert [w.token for w in got] == [t for _, _, t in expected]

    def test_frequency_tie_break(self):
        store = make_store([("common", [1.0, 0.0]), ("rare", [2.0, 0.0])])
        got = top_similar(store, np.array([1.0, 0.0]), k=2, threshold=0.5)
        assert [w.token for w in got] == ["common", "rare"]

    def test_k_must_be_positive(self):
        store = make_store([("a", [1.0])])
        with pytest.raises(ValueError):
            top_similar(store, np.array([1.0]), k=0, threshold=0.0)


class TestFrequencyRank:
    def test_most_frequent_is_zero(self):
        store = make_store([("the", [1.0]), ("of", [0.5]), ("rarity", [0.2])])
        assert store.frequency_rank("the") == 0
        assert store.frequency_rank("rarity") == 2

    def test_oov_is_none(self):
        store = make_store([("the", [1.0])])
        assert store.frequency_rank("unseen") is None

    def test_rank_equals_line_index(self):
        entries = [(f"tok{i}", [float(i)]) for i in range(7)]
        store = make_store(entries)
        for i in range(7):
            assert store.frequency_rank(f"tok{i}") == i


class TestRoundTrip:
    def test_serialize_reload_exact(self):
        rng = random.Random(41)
        entries = [
            (f"tok{i}", [rng.uniform(-5, 5) for _ in range(3)]) for i in range(20)
        ]
        store = load_embeddings(serialize_embeddings(make_store(entries)))
        again = load_embeddings(serialize_embeddings(store))
        assert store.tokens == again.tokens
        assert np.array_equal(store.matrix, again.matrix)
        assert serialize_embeddings(store) == serialize_embeddings(again)
