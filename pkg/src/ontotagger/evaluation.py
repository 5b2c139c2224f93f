"""Evaluation: per-paper precision/recall, macro averages, rater agreement,
and majority-vote gold-standard construction.

File surfaces (all JSON lines, UTF-8):
  predictions / gold:  {"paper_id": str, "topics": [str, ...]}  (gold lines
                       may also carry title/abstract/keywords metadata)
  annotations:         {"paper_id": str, "rater": str, "topics": [str, ...]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .ontology import Ontology, TopicId


@dataclass(frozen=True)
class PaperEval:
    paper_id: str
    precision: float
    recall: float
    empty_cl: bool = False
    empty_gs: bool = False


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    papers: int
    per_paper: tuple[PaperEval, ...] = ()


def enrich_with_supers(topics: Iterable[TopicId], ont: Ontology) -> frozenset[TopicId]:
    """The topic set plus the direct super-topics of each of its members."""
    enriched: set[TopicId] = set()
    for topic in topics:
        canonical = ont.canonical(topic)
        enriched.add(canonical)
        enriched.update(ont.direct_supers(canonical))
    return frozenset(enriched)


def paper_pr_re(
    cl: Iterable[TopicId],
    gs: Iterable[TopicId],
    ont: Ontology | None = None,
    enrich: bool = False,
) -> tuple[float, float]:
    """Precision and recall of a classified set against a gold set.

    With ``enrich`` both sides are first expanded with their direct
    super-topics (requires the ontology; unresolvable topics raise
    UnknownTopicError naming the topic). Empty cl yields precision 0, empty
    gs yields recall 0.
    """
    cl, gs = frozenset(cl), frozenset(gs)
    if enrich:
        if ont is None:
            raise ValueError("enrichment requires an ontology")
        cl = enrich_with_supers(cl, ont)
        gs = enrich_with_supers(gs, ont)
    common = len(cl & gs)
    pr = common / len(cl) if cl else 0.0
    re = common / len(gs) if gs else 0.0
    return pr, re


def aggregate(per_paper: Sequence) -> EvalReport:
    """Macro-average precision/recall over papers; F1 is their harmonic mean."""
    if not per_paper:
        raise ValueError("cannot aggregate an empty evaluation")
    evals: list[PaperEval] = []
    for i, item in enumerate(per_paper):
        if isinstance(item, PaperEval):
            evals.append(item)
        else:
            pr, re = item
            evals.append(PaperEval(str(i), float(pr), float(re)))
    precision = sum(e.precision for e in evals) / len(evals)
    recall = sum(e.recall for e in evals) / len(evals)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalReport(precision, recall, f1, len(evals), tuple(evals))


def fleiss_kappa(matrix: Sequence[Sequence]) -> float:
    """Fleiss' kappa over an items x raters matrix of categorical values.

    Every row must have the same (>= 2) number of ratings and every cell
    must be filled. All-unanimous data with a single used category has
    expected agreement 1 and is defined as kappa = 1.0.
    """
    if not matrix:
        raise ValueError("rating matrix must have at least one item")
    width = len(matrix[0])
    if width < 2:
        raise ValueError("rating matrix needs at least two raters")
    for row in matrix:
        if len(row) != width:
            raise ValueError("rating matrix must be rectangular")
        if any(cell is None for cell in row):
            raise ValueError("rating matrix must have every cell filled")
    categories = sorted({cell for row in matrix for cell in row}, key=repr)
    n_items, n_raters = len(matrix), width
    counts = [[sum(1 for cell in row if cell == cat) for cat in categories] for row in matrix]
    p_i = [
        (sum(c * c for c in row) - n_raters) / (n_raters * (n_raters - 1))
        for row in counts
    ]
    p_bar = sum(p_i) / n_items
    totals = [sum(row[j] for row in counts) for j in range(len(categories))]
    grand = n_items * n_raters
    p_j = [t / grand for t in totals]
    p_e = sum(p * p for p in p_j)
    if p_e >= 1.0:
        return 1.0 if p_bar >= 1.0 else 0.0
    return (p_bar - p_e) / (1.0 - p_e)


def kappa_per_paper(
    annotations: Mapping[str, Mapping[str, Iterable[TopicId]]],
) -> dict[str, float]:
    """Fleiss' kappa per paper over relevant/not-relevant judgments.

    The item universe for a paper is the union of topics any of its raters
    marked relevant; each cell is whether a given rater marked the topic.
    """
    result: dict[str, float] = {}
    for paper_id in sorted(annotations):
        raters = sorted(annotations[paper_id])
        marked = {r: frozenset(annotations[paper_id][r]) for r in raters}
        items = sorted(set().union(*marked.values()) if marked else set())
        if not items or len(raters) < 2:
            continue
        matrix = [[topic in marked[r] for r in raters] for topic in items]
        result[paper_id] = fleiss_kappa(matrix)
    return result


def kappa_summary(per_paper: Mapping[str, float]) -> tuple[float, float]:
    """Mean and population standard deviation of per-paper kappas."""
    values = list(per_paper.values())
    if not values:
        raise ValueError("no kappa values to summarize")
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def majority_gold(
    annotations: Mapping[str, Mapping[str, Iterable[TopicId]]],
    ont: Ontology,
    min_raters: int = 3,
    min_votes: int | None = None,
) -> dict[str, frozenset[TopicId]]:
    """Majority-vote gold standard from per-rater topic sets.

    Each rater's set is first enriched with direct super-areas, then a topic
    is kept when at least ``min_votes`` raters (default: ceil(raters / 2),
    i.e. "at least two" with three raters) marked it. Papers with fewer than
    ``min_raters`` raters are an error; papers where nothing reaches the
    quorum are omitted.
    """
    short = sorted(p for p, raters in annotations.items() if len(raters) < min_raters)
    if short:
        raise ValueError(
            f"papers with fewer than {min_raters} raters: {', '.join(short)}"
        )
    gold: dict[str, frozenset[TopicId]] = {}
    for paper_id in sorted(annotations):
        raters = annotations[paper_id]
        needed = min_votes if min_votes is not None else math.ceil(len(raters) / 2)
        votes: dict[TopicId, int] = {}
        for rater in sorted(raters):
            for topic in enrich_with_supers(raters[rater], ont):
                votes[topic] = votes.get(topic, 0) + 1
        kept = frozenset(t for t, v in votes.items() if v >= needed)
        if kept:
            gold[paper_id] = kept
    return gold


def _read_jsonl(path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict):
                raise ValueError(f"{path}: line {lineno}: expected a JSON object")
            records.append(record)
    return records


def read_topic_sets(path) -> dict[str, frozenset[TopicId]]:
    """Read a predictions or gold file into paper_id -> topic set."""
    sets: dict[str, frozenset[TopicId]] = {}
    for record in _read_jsonl(path):
        paper_id = str(record.get("paper_id", ""))
        if not paper_id:
            raise ValueError(f"{path}: record without paper_id")
        sets[paper_id] = frozenset(str(t) for t in record.get("topics", []))
    return sets


def read_annotations(path) -> dict[str, dict[str, frozenset[TopicId]]]:
    """Read an annotations file into paper_id -> rater -> topic set."""
    out: dict[str, dict[str, frozenset[TopicId]]] = {}
    for record in _read_jsonl(path):
        paper_id = str(record.get("paper_id", ""))
        rater = str(record.get("rater", ""))
        if not paper_id or not rater:
            raise ValueError(f"{path}: annotation record needs paper_id and rater")
        out.setdefault(paper_id, {})[rater] = frozenset(
            str(t) for t in record.get("topics", [])
        )
    return out


def write_topic_sets(path, sets: Mapping[str, Iterable[TopicId]]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for paper_id in sorted(sets):
            record = {"paper_id": paper_id, "topics": sorted(sets[paper_id])}
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def evaluate_sets(
    predictions: Mapping[str, Iterable[TopicId]],
    gold: Mapping[str, Iterable[TopicId]],
    ont: Ontology | None = None,
    enrich: bool = False,
    gold_enriched: bool = False,
) -> EvalReport:
    """Evaluate aligned prediction/gold maps; ids must match exactly.

    ``gold_enriched`` marks a gold file whose sets already include direct
    super-topics, so enrichment is applied to the predictions only.
    """
    missing = sorted(set(gold) - set(predictions))
    extra = sorted(set(predictions) - set(gold))
    if missing or extra:
        raise IdMismatchError(missing, extra)
    if not predictions:
        raise ValueError("no predictions to evaluate")
    per_paper: list[PaperEval] = []
    for paper_id in sorted(predictions):
        cl = frozenset(predictions[paper_id])
        gs = frozenset(gold[paper_id])
        if enrich:
            if ont is None:
                raise ValueError("enrichment requires an ontology")
            cl = enrich_with_supers(cl, ont)
            if not gold_enriched:
                gs = enrich_with_supers(gs, ont)
        pr, re = paper_pr_re(cl, gs)
        per_paper.append(PaperEval(paper_id, pr, re, empty_cl=not cl, empty_gs=not gs))
    return aggregate(per_paper)


class IdMismatchError(ValueError):
    def __init__(self, missing: list[str], extra: list[str]):
        self.missing = missing
        self.extra = extra
        message = "paper ids do not align"
        if missing:
            message += f"; gold-only ids: {', '.join(missing)}"
        if extra:
            message += f"; prediction-only ids: {', '.join(extra)}"
        super().__init__(message)


def report_to_dict(report: EvalReport) -> dict:
    return {
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "papers": report.papers,
        "per_paper": [
            {
                "paper_id": e.paper_id,
                "precision": e.precision,
                "recall": e.recall,
                "empty_cl": e.empty_cl,
                "empty_gs": e.empty_gs,
            }
            for e in report.per_paper
        ],
    }
