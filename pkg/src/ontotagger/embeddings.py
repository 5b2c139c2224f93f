"""Pre-trained word-embedding store with frequency-ordered vocabulary.

File format (text): a header line ``<count> <dim>`` followed by one line per
token, ``token v1 v2 ... v<dim>``, ordered by descending corpus frequency.
Multiword tokens use underscores ("digital_libraries"). The line order is
the frequency order: ordinal 0 is the most frequent token, which is what the
generic-term filter downstream relies on.
"""

from __future__ import annotations

import io
from typing import NamedTuple

import numpy as np

from .textproc import Gram


class EmbeddingFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SimilarWord(NamedTuple):
    token: str
    cosine: float


class EmbeddingStore:
    """Immutable token -> vector table; concurrent queries are safe."""

    def __init__(self, tokens: tuple[str, ...], matrix: np.ndarray):
        self.tokens = tokens
        self.matrix = matrix
        self.matrix.setflags(write=False)
        self.dim = int(matrix.shape[1]) if matrix.ndim == 2 else 0
        self._index = {token: i for i, token in enumerate(tokens)}
        self._norms = np.linalg.norm(matrix, axis=1) if len(tokens) else np.zeros(0)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def vector(self, token: str) -> np.ndarray | None:
        i = self._index.get(token)
        return None if i is None else self.matrix[i].copy()

    def frequency_rank(self, token: str) -> int | None:
        """Position in descending-frequency order; None for OOV tokens."""
        return self._index.get(token)


def load_embeddings(source) -> EmbeddingStore:
    """Parse the text format; errors carry the offending 1-based line number."""
    if hasattr(source, "read"):
        data = source.read()
    elif isinstance(source, bytes):
        data = source
    elif isinstance(source, str) and "\n" in source:
        data = source
    else:
        with open(source, "rb") as handle:
            data = handle.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    lines = data.splitlines()
    if not lines or not lines[0].strip():
        raise EmbeddingFormatError("missing header", 1)
    header = lines[0].split()
    if len(header) != 2:
        raise EmbeddingFormatError("header must be '<count> <dim>'", 1)
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise EmbeddingFormatError("header must be '<count> <dim>'", 1) from None
    if count < 0 or dim < 0:
        raise EmbeddingFormatError("count and dim must be non-negative", 1)

    tokens: list[str] = []
    seen: dict[str, int] = {}
    matrix = np.zeros((count, dim), dtype=np.float64)
    row = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != dim + 1:
            raise EmbeddingFormatError(
                f"expected token + {dim} floats, found {len(parts)} fields", lineno
            )
        token = parts[0]
        if token in seen:
            raise EmbeddingFormatError(f"duplicate token {token!r}", lineno)
        if row >= count:
            raise EmbeddingFormatError(f"more rows than the declared count {count}", lineno)
        try:
            matrix[row] = [float(x) for x in parts[1:]]
        except ValueError:
            raise EmbeddingFormatError("unparseable float", lineno) from None
        seen[token] = row
        tokens.append(token)
        row += 1
    if row != count:
        raise EmbeddingFormatError(
            f"declared count {count} but found {row} rows", len(lines)
        )
    return EmbeddingStore(tuple(tokens), matrix)


def serialize_embeddings(store: EmbeddingStore) -> str:
    """Emit the text format with round-trip-safe float precision."""
    out = io.StringIO()
    out.write(f"{len(store)} {store.dim}\n")
    for token, vec in zip(store.tokens, store.matrix):
        out.write(token)
        for x in vec:
            out.write(f" {float(x)!r}")
        out.write("\n")
    return out.getvalue()


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for zero-norm vector")
    return float(np.dot(u, v) / (nu * nv))


def gram_vector(store: EmbeddingStore, gram: Gram | str) -> np.ndarray | None:
    """Vector for an n-gram: stored underscore-joined entry, else token average.

    Returns None when neither the joined form nor any component token is in
    the vocabulary.
    """
    text = gram.text if isinstance(gram, Gram) else gram
    joined = text.replace(" ", "_")
    direct = store.vector(joined)
    if direct is not None:
        return direct
    parts = [v for token in text.split() if (v := store.vector(token)) is not None]
    if not parts:
        return None
    return np.mean(parts, axis=0)


def top_similar(
    store: EmbeddingStore,
    query: np.ndarray,
    k: int,
    threshold: float,
    exclude: str | None = None,
) -> list[SimilarWord]:
    """Up to k vocabulary tokens with cosine strictly above the threshold.

    Sorted by descending cosine; ties broken by frequency ordinal (more
    frequent first). ``exclude`` drops the query's own vocabulary token, so a
    word is never its own neighbor. Exact brute-force scan: deterministic
    regardless of any internal parallelism.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    query = np.asarray(query, dtype=np.float64)
    if len(store) == 0:
        return []
    if query.shape != (store.dim,):
        raise ValueError(f"query dimension {query.shape} != store dim {store.dim}")
    qnorm = np.linalg.norm(query)
    if qnorm == 0.0:
        raise ValueError("cosine undefined for zero-norm query")
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = (store.matrix @ query) / (store._norms * qnorm)
    candidates = [
        (float(sims[i]), i)
        for i in range(len(store))
        if store._norms[i] > 0.0 and sims[i] > threshold and store.tokens[i] != exclude
    ]
    candidates.sort(key=lambda pair: (-pair[0], pair[1]))
    return [SimilarWord(store.tokens[i], sim) for sim, i in candidates[:k]]
