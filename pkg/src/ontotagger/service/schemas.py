"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class DocumentIn(BaseModel):
    paper_id: str | None = None
    title: str = ""
    abstract: str = ""
    keywords: list[str] = Field(default_factory=list)


class ClassifyOptionsIn(BaseModel):
    mode: Literal["syntactic", "semantic", "both", "intersection", "exact", "w2vw", "tfidf"] = "both"
    msm: float = Field(0.94, gt=0.0, le=1.0)
    max_n: int = Field(3, ge=1)
    sim_threshold: float = Field(0.7, ge=-1.0, le=1.0)
    top_similar: int = Field(10, ge=1)
    filter_top_n: int = Field(3000, ge=0)
    enhancement: Literal["none", "direct", "all"] = "direct"
    window_size: int = Field(10, ge=1)
    window_stride: int = Field(5, ge=1)
    window_top: int = Field(20, ge=1)
    window_threshold: float = Field(0.6, ge=-1.0, le=1.0)
    map_threshold: float = Field(0.8, ge=0.0, le=1.0)
    top_terms: int = Field(20, ge=0)


class ClassifyRequest(BaseModel):
    document: DocumentIn
    options: ClassifyOptionsIn = Field(default_factory=ClassifyOptionsIn)


class BatchClassifyRequest(BaseModel):
    documents: list[DocumentIn]
    options: ClassifyOptionsIn = Field(default_factory=ClassifyOptionsIn)


class ScoredTopicOut(BaseModel):
    topic: str
    score: float
    frequency: int
    diversity: int


class ExplanationOut(BaseModel):
    source_gram: str
    occurrence: int
    via: str
    cosine: float | None = None


class ClassificationOut(BaseModel):
    paper_id: str
    syntactic: list[str]
    semantic: list[ScoredTopicOut]
    union: list[str]
    enhancement: list[str]
    explanations: dict[str, list[ExplanationOut]]


class BatchClassifyResponse(BaseModel):
    results: list[ClassificationOut]


class PaperTopicsIn(BaseModel):
    paper_id: str
    topics: list[str]


class EvaluateRequest(BaseModel):
    predictions: list[PaperTopicsIn]
    gold: list[PaperTopicsIn]
    enrich: bool = False
    gold_enriched: bool = False


class PaperEvalOut(BaseModel):
    paper_id: str
    precision: float
    recall: float
    empty_cl: bool
    empty_gs: bool


class EvalReportOut(BaseModel):
    precision: float
    recall: float
    f1: float
    papers: int
    per_paper: list[PaperEvalOut]


class TopicCardOut(BaseModel):
    label: str
    canonical_label: str
    alternate_labels: list[str]
    equivalent: list[str]
    direct_supers: list[str]
    children: list[str]


class HealthOut(BaseModel):
    status: str
    topics: int
    embedding_tokens: int | None = None
    embedding_dim: int | None = None
    idf_tokens: int | None = None
