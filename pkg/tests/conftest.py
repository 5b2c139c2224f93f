"""Shared fixtures: the running-example document and its engineered ontology."""

from __future__ import annotations

import random

import pytest

from ontotagger import Document, load_ontology

SAMPLE_PAPER_TOPICS = frozenset({
    "microblogging",
    "real-world networks",
    "data privacy",
    "sensitive informations",
    "social networks",
    "anonymization",
    "anonymity",
    "online social networks",
    "privacy",
    "twitter",
    "data mining",
    "network topology",
    "graph theory",
})

# Alternate surface labels carried by fixture topics. "privacy" is both a
# canonical label and an alternate of "data privacy" (one surface label, two
# topics); the hyphenated forms cover in-text tokens like "data-mining" whose
# unigram similarity to the spaced label falls below the 0.94 threshold.
ALTERNATE_LABELS = (
    ("graphs", "graph theory"),
    ("sensitive information", "sensitive informations"),
    ("privacy", "data privacy"),
    ("data-mining", "data mining"),
)

DISTRACTOR_TOPICS = (
    "machine learning",
    "artificial intelligence",
    "semantic web",
    "linked data",
    "deep learning",
    "databases",
    "information retrieval",
    "computer vision",
    "natural language processing",
    "software engineering",
    "cloud computing",
    "cryptography",
    "operating systems",
    "distributed computing",
    "human computer interaction",
    "reinforcement learning",
    "knowledge representation",
    "wireless sensor networks",
    "image processing",
    "quantum computing",
)

# Super-topics wired into the fixture hierarchy (enhancement targets).
FIXTURE_SUPERS = (
    ("security of data", "data privacy"),
    ("security of data", "privacy"),
    ("security of data", "anonymization"),
    ("security of data", "anonymity"),
    ("security of data", "sensitive informations"),
    ("world wide web", "social networks"),
    ("world wide web", "online social networks"),
    ("world wide web", "microblogging"),
    ("world wide web", "twitter"),
    ("theoretical computer science", "graph theory"),
    ("complex networks", "real-world networks"),
    ("complex networks", "network topology"),
    ("computer science", "data mining"),
    ("computer science", "security of data"),
    ("computer science", "world wide web"),
    ("computer science", "theoretical computer science"),
    ("computer science", "complex networks"),
)


def running_example_csv() -> str:
    rows = [f'"{parent}",superTopicOf,"{child}"' for parent, child in FIXTURE_SUPERS]
    rows += [f'"computer science",superTopicOf,"{label}"' for label in DISTRACTOR_TOPICS]
    rows += [f'"{alt}",alternateLabelOf,"{topic}"' for alt, topic in ALTERNATE_LABELS]
    return "\n".join(rows) + "\n"


@pytest.fixture(scope="session")
def running_example_ontology():
    return load_ontology(running_example_csv())


@pytest.fixture(scope="session")
def running_example_doc() -> Document:
    return Document(
        title="De-anonymizing Social Networks",
        abstract=(
            "Operators of online social networks are increasingly sharing potentially "
            "sensitive information about users and their relationships with advertisers, "
            "application developers, and data-mining researchers. Privacy is typically "
            "protected by anonymization, i.e., removing names, addresses, etc. We present "
            "a framework for analyzing privacy and anonymity in social networks and "
            "develop a new re-identification algorithm targeting anonymized "
            "social-network graphs. To demonstrate its effectiveness on real-world "
            "networks, we show that a third of the users who can be verified to have "
            "accounts on both Twitter, a popular microblogging service, and Flickr, an "
            "online photo-sharing site, can be re-identified in the anonymous Twitter "
            "graph with only a 12% error rate. Our de-anonymization algorithm is based "
            "purely on the network topology, does not require creation of a large number "
            "of dummy \"sybil\" nodes, is robust to noise and all existing defenses, and "
            "works even when the overlap between the target network and the adversary's "
            "auxiliary information is small."
        ),
        keywords=("social networks", "anonymity", "privacy"),
    )


WORD_POOL = (
    "alpha", "beta", "gamma", "delta", "omega", "vector", "matrix", "signal",
    "kernel", "lattice", "cluster", "stream", "query", "index", "cache",
    "router", "protocol", "cipher", "token", "parser",
)


def random_ontology_rows(rng: random.Random, n_topics: int = 8) -> tuple[list[str], list[str]]:
    """A random acyclic fixture ontology; returns (labels, csv rows)."""
    labels = []
    while len(labels) < n_topics:
        size = rng.randint(1, 2)
        label = " ".join(rng.choice(WORD_POOL) for _ in range(size))
        if label not in labels:
            labels.append(label)
    rows = []
    for i, label in enumerate(labels[1:], start=1):
        parent = labels[rng.randrange(i)]  # edges only to earlier labels: acyclic
        rows.append(f'"{parent}",superTopicOf,"{label}"')
    return labels, rows


def random_document(rng: random.Random, labels: list[str], n_sentences: int = 3) -> Document:
    sentences = []
    for _ in range(n_sentences):
        words: list[str] = []
        for _ in range(rng.randint(3, 9)):
            if labels and rng.random() < 0.45:
                words.append(rng.choice(labels))
            else:
                words.append(rng.choice(WORD_POOL) + rng.choice(("", "s", "ing")))
        sentences.append(" ".join(words) + ".")
    return Document(title=sentences[0], abstract=" ".join(sentences[1:]))
