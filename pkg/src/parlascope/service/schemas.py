"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class VisTermModel(BaseModel):
    term: str
    p_kw: float
    p_w: float


class VisTopicModel(BaseModel):
    id: int
    x: float
    y: float
    proportion: float
    terms: list[VisTermModel]


class CorpusInfoModel(BaseModel):
    n_tokens: int


class VisDataModel(BaseModel):
    k: int
    default_lambda: float
    topics: list[VisTopicModel]
    corpus: CorpusInfoModel


class ModelInfo(BaseModel):
    id: str
    k: int
    n_tokens: int


class RelevanceRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    p_kw: float
    p_w: float
    lambda_: float = Field(alias="lambda")


class RelevanceResponse(BaseModel):
    score: float


class RankRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    topic: int
    lambda_: float = Field(alias="lambda")
    top_n: int = 10


class RankedTerm(BaseModel):
    term: str
    score: float


class RankResponse(BaseModel):
    topic: int
    terms: list[RankedTerm]


class MetricsRequest(BaseModel):
    tp: int
    fp: int
    fn: int
    tn: int


class MetricsResponse(BaseModel):
    tp: int
    fp: int
    fn: int
    tn: int
    accuracy: float
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]


class PolarityRequest(BaseModel):
    scores: list[float]
    neg_threshold: float = 0.2
    pos_threshold: float = 0.8


class PolarityResponse(BaseModel):
    n: int
    pct_negative: float
    pct_neutral: float
    pct_positive: float
    neg_threshold: float
    pos_threshold: float


class HistogramRequest(BaseModel):
    scores: list[float]
    bins: int = 20


class HistogramResponse(BaseModel):
    bins: int
    counts: list[int]
