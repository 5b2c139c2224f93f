"""Text processing primitives: tokenization, stopwords, n-grams, edit similarity.

Everything here is a pure function over immutable values, so the whole module
is safe to use concurrently once the bundled stopword list has been loaded.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

_SENTENCE_ENDERS = frozenset(".!?")


def normalize_label(label: str) -> str:
    """Canonical surface form used for all label and gram comparisons.

    Case-folds, maps underscores to spaces, and collapses whitespace runs.
    Hyphens are deliberately left alone: hyphen/space variation is handled by
    the edit-distance matcher, not by rewriting.
    """
    return " ".join(label.replace("_", " ").casefold().split())


class Token(NamedTuple):
    surface: str
    position: int


TokenSequence = tuple[Token, ...]


@dataclass(frozen=True)
class Gram:
    """A contiguous run of 1..n tokens, joined by single spaces.

    ``start``/``stop`` are a half-open position span in the token stream the
    gram was drawn from.
    """

    text: str
    n: int
    start: int
    stop: int


def split_sentences(text: str) -> list[str]:
    """Split on sentence-ending punctuation (. ! ?).

    Intentionally naive: abbreviations like "i.e." produce extra fragments,
    which only shortens candidate grams and never merges material across a
    real sentence break.
    """
    sentences: list[str] = []
    current: list[str] = []
    for ch in text:
        if ch in _SENTENCE_ENDERS:
            piece = "".join(current).strip()
            if piece:
                sentences.append(piece)
            current = []
        else:
            current.append(ch)
    piece = "".join(current).strip()
    if piece:
        sentences.append(piece)
    return sentences


def _strip_edges(raw: str) -> str:
    start, stop = 0, len(raw)
    while start < stop and not raw[start].isalnum():
        start += 1
    while stop > start and not raw[stop - 1].isalnum():
        stop -= 1
    return raw[start:stop]


def tokenize(text: str) -> TokenSequence:
    """Case-fold and split on whitespace, stripping punctuation from token edges.

    Intra-word punctuation survives, so "social-network" stays one token.
    ``position`` indexes the raw whitespace-split sequence: a token that was
    pure punctuation is dropped but still consumes a position, leaving a gap
    that blocks n-grams from bridging it.
    """
    tokens: list[Token] = []
    for position, raw in enumerate(text.casefold().split()):
        surface = _strip_edges(raw)
        if surface:
            tokens.append(Token(surface, position))
    return tuple(tokens)


def remove_stopwords(seq: TokenSequence, stoplist: frozenset[str] | set[str]) -> TokenSequence:
    """Drop stoplisted tokens; surviving tokens keep their original positions."""
    return tuple(tok for tok in seq if tok.surface not in stoplist)


def ngrams(seq: TokenSequence, max_n: int = 3) -> list[Gram]:
    """All grams of size 1..max_n over position-contiguous token runs.

    Grams never bridge a gap left by a removed stopword (or dropped
    punctuation token), because the positions there are not consecutive.
    Output is ordered by start position, then by gram size.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    grams: list[Gram] = []
    for i, first in enumerate(seq):
        for n in range(1, max_n + 1):
            if i + n > len(seq):
                break
            window = seq[i : i + n]
            if window[-1].position - first.position != n - 1:
                break
            grams.append(
                Gram(
                    text=" ".join(tok.surface for tok in window),
                    n=n,
                    start=first.position,
                    stop=window[-1].position + 1,
                )
            )
    return grams


def lev_distance(a: str, b: str) -> int:
    """Edit distance with insertion/deletion cost 1 and substitution cost 2."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(b) < len(a):
        a, b = b, a
    prev = list(range(len(a) + 1))
    for j, cb in enumerate(b, 1):
        cur = [j]
        for i, ca in enumerate(a, 1):
            cur.append(min(prev[i] + 1, cur[i - 1] + 1, prev[i - 1] + (0 if ca == cb else 2)))
        prev = cur
    return prev[-1]


def lev_similarity(a: str, b: str) -> float:
    """Normalized similarity (|a| + |b| - d) / (|a| + |b|) over `lev_distance`.

    Under this normalization both plural variation ("database" vs
    "databases", 16/17) and hyphen/space substitution on long labels
    ("knowledge based systems" vs "knowledge-based systems", 44/46) clear a
    0.94 threshold. Two empty strings are defined as identical (1.0).
    """
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return (total - lev_distance(a, b)) / total


def similarity_length_bounds(length: int, threshold: float) -> tuple[int, int]:
    """Inclusive candidate-length window for `lev_similarity(a, b) >= threshold`.

    Since an insertion or deletion costs 1, the similarity of strings of
    lengths la <= lb is at most 2*la/(la+lb); anything outside the returned
    window cannot reach the threshold. Used to prune fuzzy label scans.
    """
    if threshold <= 0:
        return 0, 10**9
    low = length * threshold / (2.0 - threshold)
    high = length * (2.0 - threshold) / threshold
    return int(low), int(high) + 1


def load_stopwords(source) -> frozenset[str]:
    """Read a stopword file: one token per line, '#' starts a comment."""
    if hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as handle:
            data = handle.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    words = set()
    for line in data.splitlines():
        word = line.split("#", 1)[0].strip().casefold()
        if word:
            words.add(word)
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The bundled, versioned English stopword list."""
    ref = importlib.resources.files("ontotagger").joinpath("data/stopwords.txt")
    with ref.open("rb") as handle:
        return load_stopwords(handle)


def document_token_stream(pieces: Iterable[str]) -> TokenSequence:
    """Concatenate tokenized pieces into one stream with globally unique positions."""
    tokens: list[Token] = []
    offset = 0
    for piece in pieces:
        part = tokenize(piece)
        tokens.extend(Token(tok.surface, tok.position + offset) for tok in part)
        if part:
            offset += part[-1].position + 2  # +2 keeps a gap between pieces
        else:
            offset += 1
    return tuple(tokens)
