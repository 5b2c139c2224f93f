"""Research-area ontology: loading, validation, and indexed queries.

The on-disk format is a minimal three-column CSV (UTF-8, no header,
RFC 4180 quoting): ``source_label,relation,target_label`` with relation one
of ``superTopicOf``, ``relatedEquivalent``, ``alternateLabelOf``.

A ``superTopicOf`` row (A, superTopicOf, B) states that A is the super-area
of B. ``relatedEquivalent`` rows are symmetric and partition topics into
equivalence classes with one designated canonical member. An
``alternateLabelOf`` row (L, alternateLabelOf, T) registers the surface
string L as an additional label of topic T; the same surface label may be
carried by several topics.

An Ontology is immutable after load and safe to share across threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .textproc import normalize_label

SUPER_TOPIC_OF = "superTopicOf"
RELATED_EQUIVALENT = "relatedEquivalent"
ALTERNATE_LABEL_OF = "alternateLabelOf"
_RELATIONS = frozenset({SUPER_TOPIC_OF, RELATED_EQUIVALENT, ALTERNATE_LABEL_OF})

TopicId = str


class OntologyError(ValueError):
    pass


class OntologyParseError(OntologyError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class OntologyCycleError(OntologyError):
    def __init__(self, member: TopicId):
        super().__init__(f"superTopicOf graph contains a cycle through {member!r}")
        self.member = member


class UnknownTopicError(KeyError):
    def __init__(self, topic: TopicId):
        super().__init__(topic)
        self.topic = topic

    def __str__(self) -> str:
        return f"unknown topic {self.topic!r}"


@dataclass(frozen=True)
class Topic:
    id: TopicId
    canonical_label: str
    alternate_labels: frozenset[str] = field(default_factory=frozenset)

    @property
    def labels(self) -> frozenset[str]:
        return self.alternate_labels | {self.canonical_label}


class Ontology:
    """Topic set plus super-topic edges, equivalence classes, and a label index.

    Super-topic edges are stored between canonical class representatives, so
    hierarchy queries see an equivalence class as a single node.
    """

    def __init__(
        self,
        topics: dict[TopicId, Topic],
        super_edges: frozenset[tuple[TopicId, TopicId]],
        canon_map: dict[TopicId, TopicId],
        equiv_edges: tuple[tuple[TopicId, TopicId], ...],
    ):
        self.topics = topics
        self.super_edges = super_edges  # (child, parent), canonical endpoints
        self._canon = canon_map
        self.equiv_edges = equiv_edges
        self._parents: dict[TopicId, set[TopicId]] = {}
        self._children: dict[TopicId, set[TopicId]] = {}
        for child, parent in super_edges:
            self._parents.setdefault(child, set()).add(parent)
            self._children.setdefault(parent, set()).add(child)
        self.label_index: dict[str, frozenset[TopicId]] = {}
        index: dict[str, set[TopicId]] = {}
        for topic in topics.values():
            for label in topic.labels:
                index.setdefault(label, set()).add(topic.id)
        self.label_index = {label: frozenset(ids) for label, ids in index.items()}
        reps = {self._canon[t] for t in topics}
        self.roots = frozenset(r for r in reps if not self._parents.get(r))

    def __len__(self) -> int:
        return len(self.topics)

    def __contains__(self, topic: TopicId) -> bool:
        return topic in self.topics

    def _require(self, topic: TopicId) -> TopicId:
        if topic not in self.topics:
            raise UnknownTopicError(topic)
        return topic

    def topics_by_label(self, label: str) -> frozenset[TopicId]:
        """All topics carrying the label (canonical or alternate), un-canonicalized."""
        return self.label_index.get(normalize_label(label), frozenset())

    def canonical(self, topic: TopicId) -> TopicId:
        """The designated canonical member of the topic's equivalence class."""
        return self._canon[self._require(topic)]

    def equivalence_class(self, topic: TopicId) -> frozenset[TopicId]:
        rep = self.canonical(topic)
        return frozenset(t for t, r in self._canon.items() if r == rep)

    def direct_supers(self, topic: TopicId) -> frozenset[TopicId]:
        return frozenset(self._parents.get(self.canonical(topic), ()))

    def direct_children(self, topic: TopicId) -> frozenset[TopicId]:
        return frozenset(self._children.get(self.canonical(topic), ()))

    def ancestors(self, topic: TopicId) -> frozenset[TopicId]:
        """Transitive closure of direct_supers, excluding the topic itself."""
        seen: set[TopicId] = set()
        frontier = [self.canonical(topic)]
        while frontier:
            current = frontier.pop()
            for parent in self._parents.get(current, ()):
                if parent not in seen:
                    seen.add(parent)
                    frontier.append(parent)
        seen.discard(self.canonical(topic))
        return frozenset(seen)


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def add(self, x: str) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _decode_lines(source) -> io.TextIOBase:
    if hasattr(source, "read"):
        data = source.read()
    elif isinstance(source, bytes):
        data = source
    elif isinstance(source, str) and ("\n" in source or "," in source):
        data = source
    else:
        with open(source, "rb") as handle:
            data = handle.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data)


def load_ontology(source) -> Ontology:
    """Load and validate an ontology from CSV (path, file object, bytes, or text).

    Raises OntologyParseError for malformed rows (with the 1-based line
    number), OntologyCycleError if the super-topic graph is cyclic.
    """
    reader = csv.reader(_decode_lines(source))
    super_rows: list[tuple[str, str]] = []
    equiv_rows: list[tuple[str, str]] = []
    alt_rows: list[tuple[str, str]] = []
    for row in reader:
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        line = reader.line_num
        if len(row) != 3:
            raise OntologyParseError(f"expected 3 fields, found {len(row)}", line)
        source_label, relation, target_label = (f.strip() for f in row)
        if relation not in _RELATIONS:
            raise OntologyParseError(f"unknown relation {relation!r}", line)
        src, dst = normalize_label(source_label), normalize_label(target_label)
        if not src or not dst:
            raise OntologyParseError("empty label after normalization", line)
        if relation == SUPER_TOPIC_OF:
            super_rows.append((src, dst))
        elif relation == RELATED_EQUIVALENT:
            equiv_rows.append((src, dst))
        else:
            alt_rows.append((src, dst))

    topic_ids: set[TopicId] = set()
    for a, b in super_rows + equiv_rows:
        topic_ids.update((a, b))
    alt_targets: set[TopicId] = set()
    alternates: dict[TopicId, set[str]] = {}
    for label, target in alt_rows:
        topic_ids.add(target)
        alt_targets.add(target)
        alternates.setdefault(target, set()).add(label)

    uf = _UnionFind()
    for t in topic_ids:
        uf.add(t)
    for a, b in equiv_rows:
        uf.union(a, b)
    classes: dict[TopicId, set[TopicId]] = {}
    for t in topic_ids:
        classes.setdefault(uf.find(t), set()).add(t)
    canon_map: dict[TopicId, TopicId] = {}
    for members in classes.values():
        tagged = sorted(members & alt_targets)
        rep = tagged[0] if tagged else min(members)
        for member in members:
            canon_map[member] = rep

    super_edges = frozenset(
        (canon_map[child], canon_map[parent]) for parent, child in super_rows
    )
    _check_acyclic(topic_ids, super_edges, canon_map)

    topics = {
        tid: Topic(tid, tid, frozenset(alternates.get(tid, ())))
        for tid in topic_ids
    }
    equiv_edges = tuple(sorted(set(tuple(sorted(pair)) for pair in equiv_rows)))
    return Ontology(topics, super_edges, canon_map, equiv_edges)


def _check_acyclic(
    topic_ids: set[TopicId],
    super_edges: frozenset[tuple[TopicId, TopicId]],
    canon_map: dict[TopicId, TopicId],
) -> None:
    for child, parent in super_edges:
        if child == parent:
            raise OntologyCycleError(child)
    nodes = {canon_map[t] for t in topic_ids}
    out: dict[TopicId, set[TopicId]] = {n: set() for n in nodes}
    indeg: dict[TopicId, int] = {n: 0 for n in nodes}
    for child, parent in super_edges:
        out[child].add(parent)
        indeg[parent] += 1
    queue = [n for n in nodes if indeg[n] == 0]
    visited = 0
    while queue:
        node = queue.pop()
        visited += 1
        for nxt in out[node]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                queue.append(nxt)
    if visited != len(nodes):
        stuck = min(n for n in nodes if indeg[n] > 0)
        raise OntologyCycleError(stuck)


def serialize_ontology(ont: Ontology) -> str:
    """Write the ontology back to its CSV format (deterministic row order)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for child, parent in sorted(ont.super_edges):
        writer.writerow([parent, SUPER_TOPIC_OF, child])
    for a, b in ont.equiv_edges:
        writer.writerow([a, RELATED_EQUIVALENT, b])
    for tid in sorted(ont.topics):
        for alt in sorted(ont.topics[tid].alternate_labels):
            writer.writerow([alt, ALTERNATE_LABEL_OF, tid])
    return buffer.getvalue()
