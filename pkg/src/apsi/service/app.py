"""FastAPI application over a preloaded taxonomy and training corpus.

The heavy immutable state (taxonomy, training corpus, optional word
vectors) loads once at startup; every request is a cheap pure function
over it.  The command-line interface calls the same underlying pipeline
functions in-process.
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..baselines import WordVectors, baseline_random, baseline_top_one
from ..config import Config, Eq4GroupFactor, Erouge2Mode, MergeStrategy
from ..corpus import EventGraph, Process, ProcessGraph, load_corpus
from ..errors import InputError, NoAnalogousProcessesError
from ..evaluator import MatchStandard, Setting, build_report
from ..pipeline import build_representations, corpus_stats
from ..sequencer import predict_sequence
from ..taxonomy import Taxonomy, load_taxonomy
from .schemas import (
    BaselineRequest,
    EvaluateRequest,
    EvaluateResponse,
    HealthResponse,
    InduceRequest,
    InduceResponse,
    PredictionModel,
    StatsResponse,
)

TAXONOMY_ENV = "APSI_TAXONOMY"
TRAIN_ENV = "APSI_TRAIN"
VECTORS_ENV = "APSI_VECTORS"

_EROUGE2_MODES = {"adjacent": "adjacent", "pairs": "all_ordered_pairs"}


class Engine:
    """Immutable shared state plus request-level operations."""

    def __init__(
        self,
        taxonomy: Taxonomy,
        train: list[ProcessGraph],
        vectors: Optional[WordVectors],
    ):
        self.taxonomy = taxonomy
        self.train = train
        self.vectors = vectors

    def induce(self, request: InduceRequest) -> InduceResponse:
        cfg = Config(
            w_v=request.wv,
            w_n=request.wn,
            max_concept_depth=request.max_depth,
            max_candidates_per_event=request.max_candidates,
            merge_strategy=MergeStrategy(request.strategy),
            eq4_group_factor=Eq4GroupFactor(request.eq4),
        )
        process = Process.parse(request.process)
        k = request.k if request.k is not None else cfg.k
        dump_p = dump_a = None
        try:
            s_p, s_a = build_representations(process, self.train, self.taxonomy, cfg)
            prediction = predict_sequence(process, s_p, s_a, k, self.taxonomy, cfg)
            if request.dump_abstract:
                dump_p, dump_a = s_p.to_json(), s_a.to_json()
        except NoAnalogousProcessesError:
            if request.fallback != "random":
                raise
            prediction = baseline_random(process, self.train, k, request.seed)
        return InduceResponse(
            prediction=PredictionModel(**prediction.to_json()),
            predicate_side=dump_p,
            argument_side=dump_a,
        )

    def evaluate(self, request: EvaluateRequest) -> EvaluateResponse:
        predictions = []
        for entry in request.predictions:
            events = [
                EventGraph.from_json(
                    event.model_dump(), where=f"prediction {entry.id!r} event {i}"
                )
                for i, event in enumerate(entry.events)
            ]
            if not events:
                raise InputError(f"prediction {entry.id!r} is empty")
            predictions.append((entry.id, events))
        references = []
        for entry in request.references:
            references.append(
                (
                    entry.id,
                    [
                        [
                            EventGraph.from_json(
                                event.model_dump(),
                                where=f"reference {entry.id!r}",
                            )
                            for event in ref
                        ]
                        for ref in entry.references
                    ],
                )
            )
        standards = (
            [MatchStandard(request.standard)]
            if request.standard
            else list(MatchStandard)
        )
        settings = (
            [Setting(request.setting)] if request.setting else list(Setting)
        )
        mode = Erouge2Mode(_EROUGE2_MODES[request.erouge2])
        report = build_report(
            predictions, references, self.taxonomy,
            standards=standards, settings=settings, mode=mode,
        )
        return EvaluateResponse(**report.to_json())

    def baseline(self, request: BaselineRequest) -> PredictionModel:
        process = Process.parse(request.process)
        if request.method == "random":
            prediction = baseline_random(
                process, self.train, request.k, request.seed
            )
        elif request.method == "top1-jaccard":
            prediction = baseline_top_one(process, self.train, "jaccard", request.k)
        else:
            if self.vectors is None:
                raise InputError(
                    f"no word vectors loaded; set ${VECTORS_ENV} or pass "
                    "vectors_path to create_app"
                )
            prediction = baseline_top_one(
                process, self.train, "vector", request.k, self.vectors
            )
        return PredictionModel(**prediction.to_json())


def create_app(
    taxonomy_spec: Optional[str] = None,
    train_path: Optional[str] = None,
    vectors_path: Optional[str] = None,
) -> FastAPI:
    taxonomy_spec = taxonomy_spec or os.environ.get(TAXONOMY_ENV)
    train_path = train_path or os.environ.get(TRAIN_ENV)
    vectors_path = vectors_path or os.environ.get(VECTORS_ENV)
    if not taxonomy_spec:
        raise InputError(
            f"no taxonomy given; pass taxonomy_spec or set ${TAXONOMY_ENV}"
        )
    if not train_path:
        raise InputError(
            f"no training corpus given; pass train_path or set ${TRAIN_ENV}"
        )
    engine = Engine(
        load_taxonomy(taxonomy_spec),
        load_corpus(train_path),
        WordVectors.load(vectors_path) if vectors_path else None,
    )

    app = FastAPI(
        title="apsi",
        version=__version__,
        description="Predict ordered sub-event sequences for unseen "
        "processes by analogy over observed process graphs.",
    )
    app.state.engine = engine
    app.state.taxonomy_spec = taxonomy_spec

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(
            status="ok",
            version=__version__,
            taxonomy=taxonomy_spec,
            train_graphs=len(engine.train),
        )

    @app.post("/induce", response_model=InduceResponse)
    def induce(request: InduceRequest) -> InduceResponse:
        try:
            return engine.induce(request)
        except NoAnalogousProcessesError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except InputError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/evaluate", response_model=EvaluateResponse)
    def evaluate(request: EvaluateRequest) -> EvaluateResponse:
        try:
            return engine.evaluate(request)
        except InputError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/baseline", response_model=PredictionModel)
    def baseline(request: BaselineRequest) -> PredictionModel:
        try:
            return engine.baseline(request)
        except InputError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/stats", response_model=StatsResponse)
    def stats() -> StatsResponse:
        return StatsResponse(**corpus_stats(engine.train).to_json())

    return app
