"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class EventModel(BaseModel):
    """One event graph in the corpus wire format."""

    nodes: list[tuple[int, str, str]]
    edges: list[tuple[int, int, str]]
    root: int


class PredictedEventModel(EventModel):
    weight: float
    order_score: float


class PredictionModel(BaseModel):
    id: str
    predicate: str
    argument: str
    k: int
    truncated: bool
    events: list[PredictedEventModel]


class AbstractEventModel(BaseModel):
    event: str
    graph: EventModel
    weight: float
    order_score: float
    members: list[tuple[str, int]]


class AbstractRepresentationModel(BaseModel):
    side: str
    group_size: int
    events: list[AbstractEventModel]


class InduceRequest(BaseModel):
    process: str = Field(description="target process, e.g. 'buy+house'")
    k: Optional[int] = Field(default=None, ge=1)
    strategy: Literal["instantiation", "simple_merge", "normalized"] = (
        "instantiation"
    )
    eq4: Literal["as_printed", "reciprocal"] = "as_printed"
    wv: float = Field(default=0.5, ge=0.0, le=1.0)
    wn: float = Field(default=0.5, ge=0.0, le=1.0)
    max_depth: int = Field(default=3, ge=1)
    max_candidates: int = Field(default=1000, ge=1)
    fallback: Optional[Literal["random"]] = None
    seed: int = 0
    dump_abstract: bool = False


class InduceResponse(BaseModel):
    prediction: PredictionModel
    predicate_side: Optional[AbstractRepresentationModel] = None
    argument_side: Optional[AbstractRepresentationModel] = None


class PredictionInputModel(BaseModel):
    id: str
    events: list[EventModel]


class ReferenceSetModel(BaseModel):
    id: str
    predicate: str
    argument: str
    references: list[list[EventModel]]


class EvaluateRequest(BaseModel):
    predictions: list[PredictionInputModel]
    references: list[ReferenceSetModel]
    standard: Optional[Literal["string", "hypernym"]] = None
    setting: Optional[Literal["basic", "advanced"]] = None
    erouge2: Literal["adjacent", "pairs"] = "adjacent"


class ComboScoresModel(BaseModel):
    erouge1: float
    erouge2: float
    matched_events: int
    total_events: int
    matched_pairs: int
    total_pairs: int
    short_prediction: bool


class ProcessScoresModel(BaseModel):
    id: str
    scores: dict[str, ComboScoresModel]


class EvaluateResponse(BaseModel):
    erouge2_mode: str
    process_count: int
    mean: dict[str, dict[str, float]]
    processes: list[ProcessScoresModel]


class BaselineRequest(BaseModel):
    method: Literal["random", "top1-jaccard", "top1-vector"]
    process: str
    k: int = Field(default=4, ge=1)
    seed: int = 0


class StatsResponse(BaseModel):
    train_graphs: int
    test_graphs: Optional[int] = None
    mean_sequence_length: float
    mean_predicate_group_size: Optional[float] = None
    mean_argument_group_size: Optional[float] = None
    warning: Optional[str] = None


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
    taxonomy: str
    train_graphs: int
