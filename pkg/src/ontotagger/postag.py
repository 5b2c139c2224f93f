"""Part-of-speech tagging and noun-phrase chunk extraction.

The tagger interface is pluggable; the default is a bundled case-folded
lexicon (most frequent tag per word) plus a handful of suffix rules, with
unknown words defaulting to NN. Over-tagging unknowns as nouns biases the
chunker toward recall, which is the right direction here: chunks feed a
downstream similarity filter anyway.
"""

from __future__ import annotations

import importlib.resources
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Protocol

from .textproc import TokenSequence

_NUMERIC = re.compile(r"\d[\d.,:/-]*")


class TaggedToken(NamedTuple):
    surface: str
    tag: str


@dataclass(frozen=True)
class Chunk:
    """A maximal noun-phrase span: zero or more adjectives then one or more nouns."""

    tokens: tuple[str, ...]
    start: int
    stop: int

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


class Tagger(Protocol):
    def tag_word(self, word: str) -> str: ...


class LexiconTagger:
    """Lexicon lookup with suffix fallbacks; deterministic for a fixed lexicon."""

    def __init__(self, lexicon: dict[str, str]):
        self.lexicon = dict(lexicon)

    def tag_word(self, word: str) -> str:
        tag = self.lexicon.get(word)
        if tag is not None:
            return tag
        if _NUMERIC.fullmatch(word):
            return "CD"
        if word.endswith("ly"):
            return "RB"
        if word.endswith("ing") and len(word) > 4:
            return "VBG"
        if word.endswith("ed") and len(word) > 3:
            return "VBN"
        if word.endswith("s") and not word.endswith("ss"):
            stem_tag = self._noun_stem_tag(word)
            if stem_tag:
                return "NNS"
        return "NN"

    def _noun_stem_tag(self, word: str) -> str | None:
        for stem in (word[:-1], word[:-2] if word.endswith("es") else None,
                     word[:-3] + "y" if word.endswith("ies") else None):
            if stem:
                tag = self.lexicon.get(stem)
                if tag in ("NN", "NNP"):
                    return tag
        return None


def load_lexicon(source) -> dict[str, str]:
    """Parse a lexicon file: token<TAB>tag per line, '#' comments allowed."""
    if hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as handle:
            data = handle.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lexicon: dict[str, str] = {}
    for line in data.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, tag = line.partition("\t")
        word, tag = word.strip().casefold(), tag.strip()
        if word and tag:
            lexicon[word] = tag
    return lexicon


@lru_cache(maxsize=1)
def default_tagger() -> LexiconTagger:
    ref = importlib.resources.files("ontotagger").joinpath("data/pos_lexicon.tsv")
    with ref.open("rb") as handle:
        return LexiconTagger(load_lexicon(handle))


def pos_tag(seq: TokenSequence, tagger: Tagger | None = None) -> list[TaggedToken]:
    """One Penn Treebank tag per token."""
    tagger = tagger or default_tagger()
    return [TaggedToken(tok.surface, tagger.tag_word(tok.surface)) for tok in seq]


def extract_chunks(tagged: list[TaggedToken]) -> list[Chunk]:
    """Greedy left-to-right extraction of maximal <JJ.*>*<NN.*>+ spans.

    Adjective runs not followed by a noun are skipped; no token ever belongs
    to two chunks.
    """
    chunks: list[Chunk] = []
    i, n = 0, len(tagged)
    while i < n:
        j = i
        while j < n and tagged[j].tag.startswith("JJ"):
            j += 1
        k = j
        while k < n and tagged[k].tag.startswith("NN"):
            k += 1
        if k > j:
            chunks.append(Chunk(tuple(tok.surface for tok in tagged[i:k]), i, k))
            i = k
        else:
            i = j + 1 if j == i else j
    return chunks
