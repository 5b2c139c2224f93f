"""Ontology loading, indexing, and hierarchy-query tests."""

from __future__ import annotations

import random

import pytest

from ontotagger.ontology import (
    Ontology,
    OntologyCycleError,
    OntologyParseError,
    UnknownTopicError,
    load_ontology,
    serialize_ontology,
)

from conftest import random_ontology_rows


def ont_from_rows(*rows: str) -> Ontology:
    return load_ontology("\n".join(rows) + "\n")


class TestLoad:
    def test_empty_file(self):
        ont = load_ontology("\n")
        assert len(ont) == 0
        assert ont.super_edges == frozenset()

    def test_super_topic_row(self):
        ont = ont_from_rows('"semantic web",superTopicOf,"linked data"')
        assert len(ont) == 2
        assert ont.direct_supers("linked data") == {"semantic web"}

    def test_two_node_cycle_rejected(self):
        with pytest.raises(OntologyCycleError):
            ont_from_rows("A,superTopicOf,B", "B,superTopicOf,A")

    def test_self_loop_rejected(self):
        with pytest.raises(OntologyCycleError) as err:
            ont_from_rows("a,superTopicOf,a")
        assert err.value.member == "a"

    def test_wrong_arity_reports_line(self):
        with pytest.raises(OntologyParseError) as err:
            load_ontology("a,superTopicOf,b\nc,relatedEquivalent\n")
        assert err.value.line == 2

    def test_unknown_relation_reports_line(self):
        with pytest.raises(OntologyParseError) as err:
            load_ontology("a,narrowerThan,b\n")
        assert err.value.line == 1

    def test_empty_label_rejected(self):
        with pytest.raises(OntologyParseError):
            load_ontology('"",superTopicOf,b\n')

    def test_quoted_commas(self):
        ont = ont_from_rows('"graphs, etc",alternateLabelOf,"graph theory"')
        assert ont.topics_by_label("graphs, etc") == {"graph theory"}

    def test_case_and_underscores_normalized(self):
        ont = ont_from_rows("Machine_Learning,superTopicOf,Deep_Learning")
        assert "machine learning" in ont
        assert ont.direct_supers("deep learning") == {"machine learning"}


class TestLabelLookup:
    def test_alternate_label(self):
        ont = ont_from_rows(
            "graphs,alternateLabelOf,graph theory",
        )
        assert ont.topics_by_label("graphs") == {"graph theory"}

    def test_unknown_label(self):
        ont = ont_from_rows("a,superTopicOf,b")
        assert ont.topics_by_label("nope") == frozenset()

    def test_label_carried_by_two_topics(self):
        ont = ont_from_rows(
            "x,superTopicOf,privacy",
            "privacy,alternateLabelOf,data privacy",
        )
        assert ont.topics_by_label("privacy") == {"privacy", "data privacy"}

    def test_matches_brute_force_scan(self, running_example_ontology):
        ont = running_example_ontology
        for label in ["privacy", "graphs", "twitter", "no such label", "data-mining"]:
            expected = {
                topic.id
                for topic in ont.topics.values()
                if label in topic.labels
            }
            assert ont.topics_by_label(label) == expected


class TestCanonical:
    def test_equivalent_pair_shares_canonical(self):
        ont = ont_from_rows("ontology matching,relatedEquivalent,ontology mapping")
        assert ont.canonical("ontology matching") == ont.canonical("ontology mapping")

    def test_idempotent(self, running_example_ontology):
        ont = running_example_ontology
        for topic in ont.topics:
            assert ont.canonical(ont.canonical(topic)) == ont.canonical(topic)

    def test_singleton_class(self):
        ont = ont_from_rows("a,superTopicOf,b")
        assert ont.canonical("b") == "b"

    def test_alternate_target_wins_designation(self):
        ont = ont_from_rows(
            "aaa,relatedEquivalent,zzz",
            "zed,alternateLabelOf,zzz",
        )
        # without the alternateLabelOf row the class would canonicalize to "aaa"
        assert ont.canonical("aaa") == "zzz"

    def test_lexicographic_tie_break(self):
        ont = ont_from_rows("beta,relatedEquivalent,alpha")
        assert ont.canonical("beta") == "alpha"

    def test_unknown_topic(self):
        ont = ont_from_rows("a,superTopicOf,b")
        with pytest.raises(UnknownTopicError):
            ont.canonical("missing")

    def test_partition_matches_union_find_oracle(self):
        rng = random.Random(77)
        labels = [f"t{i}" for i in range(12)]
        pairs = [tuple(rng.sample(labels, 2)) for _ in range(8)]
        rows = [f"{a},relatedEquivalent,{b}" for a, b in pairs]
        ont = load_ontology("\n".join(rows) + "\n")

        parent = {t: t for t in ont.topics}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b in pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        for a in ont.topics:
            for b in ont.topics:
                same_class = find(a) == find(b)
                assert (ont.canonical(a) == ont.canonical(b)) == same_class


class TestHierarchy:
    def test_direct_supers_example(self):
        ont = ont_from_rows("artificial intelligence,superTopicOf,machine learning")
        assert ont.direct_supers("machine learning") == {"artificial intelligence"}

    def test_root_has_no_supers(self):
        ont = ont_from_rows("a,superTopicOf,b")
        assert ont.direct_supers("a") == frozenset()
        assert "a" in ont.roots

    def test_two_parents(self):
        ont = ont_from_rows("p,superTopicOf,c", "q,superTopicOf,c")
        assert ont.direct_supers("c") == {"p", "q"}

    def test_ancestors_chain(self):
        ont = ont_from_rows("a,superTopicOf,b", "b,superTopicOf,c")
        assert ont.ancestors("c") == {"b", "a"}

    def test_ancestors_of_root(self):
        ont = ont_from_rows("a,superTopicOf,b")
        assert ont.ancestors("a") == frozenset()

    def test_ancestors_diamond(self):
        ont = ont_from_rows(
            "a,superTopicOf,b", "a,superTopicOf,c",
            "b,superTopicOf,d", "c,superTopicOf,d",
        )
        assert ont.ancestors("d") == {"b", "c", "a"}

    def test_supers_canonicalized_through_equivalence(self):
        ont = ont_from_rows(
            "big area,superTopicOf,small area",
            "big area,relatedEquivalent,area",
        )
        assert ont.direct_supers("small area") == {"area"}

    def test_ancestors_superset_of_direct_supers(self):
        rng = random.Random(5)
        for _ in range(20):
            _, rows = random_ontology_rows(rng, n_topics=10)
            ont = load_ontology("\n".join(rows) + "\n")
            for topic in ont.topics:
                supers = ont.direct_supers(topic)
                ancestors = ont.ancestors(topic)
                assert supers <= ancestors
                assert ont.canonical(topic) not in ancestors


class TestRoundTrip:
    def test_running_example(self, running_example_ontology):
        ont = running_example_ontology
        reloaded = load_ontology(serialize_ontology(ont))
        assert set(reloaded.topics) == set(ont.topics)
        assert reloaded.super_edges == ont.super_edges
        assert reloaded.label_index == ont.label_index
        assert {t: reloaded.canonical(t) for t in reloaded.topics} == {
            t: ont.canonical(t) for t in ont.topics
        }

    def test_with_equivalences_and_alternates(self):
        ont = ont_from_rows(
            "web,superTopicOf,social web",
            "social web,relatedEquivalent,web 2.0",
            "socialweb,alternateLabelOf,social web",
        )
        once = serialize_ontology(ont)
        twice = serialize_ontology(load_ontology(once))
        assert once == twice

    def test_random_fixtures(self):
        rng = random.Random(99)
        for trial in range(15):
            labels, rows = random_ontology_rows(rng, n_topics=9)
            rows.append(f'"{labels[0]}x",alternateLabelOf,"{labels[1]}"')
            rows.append(f'"eqx{trial}",relatedEquivalent,"eqy{trial}"')
            ont = load_ontology("\n".join(rows) + "\n")
            reloaded = load_ontology(serialize_ontology(ont))
            assert set(reloaded.topics) == set(ont.topics)
            assert reloaded.super_edges == ont.super_edges
            assert reloaded.label_index == ont.label_index
