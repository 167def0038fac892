"""Random and top-one-similar-process baselines.

Both produce Prediction objects shaped like the main pipeline's output.
Baseline events carry weight 0.0 and synthetic strictly decreasing order
scores so the sequence order is explicit.
"""

from __future__ import annotations

import math
import random
from pathlib import Path
from typing import Optional, Sequence

from .corpus import EventGraph, Process, ProcessGraph
from .errors import InputError
from .sequencer import PredictedEvent, Prediction


def _sequence_prediction(
    process: Process, events: Sequence[EventGraph], k: int
) -> Prediction:
    predicted = tuple(
        PredictedEvent(event, 0.0, float(len(events) - i))
        for i, event in enumerate(events)
    )
    return Prediction(process, predicted, k, truncated=len(predicted) < k)


def baseline_random(
    process: Process, train: list[ProcessGraph], k: int, seed: int
) -> Prediction:
    """k events drawn uniformly without replacement from the multiset of
    all training sub-events."""
    if not train:
        raise InputError("random baseline needs a non-empty training corpus")
    pool = [step for graph in train for step in graph.steps]
    rng = random.Random(seed)
    drawn = rng.sample(pool, min(k, len(pool)))
    return _sequence_prediction(process, drawn, k)


def jaccard(a: set[str], b: set[str]) -> float:
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(x * x for x in b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    dot = sum(x * y for x, y in zip(a, b))
    return dot / (norm_a * norm_b)


class WordVectors:
    """Plain-text embeddings, one ``word v1 ... vd`` row per line."""

    def __init__(self, vectors: dict[str, tuple[float, ...]], dim: int):
        self.vectors = vectors
        self.dim = dim

    @classmethod
    def load(cls, path: str) -> "WordVectors":
        if not Path(path).is_file():
            raise InputError(f"vector file {path} does not exist")
        vectors: dict[str, tuple[float, ...]] = {}
        dim: Optional[int] = None
        with open(path, encoding="utf-8") as handle:
            for line_no, raw in enumerate(handle, 1):
                line = raw.strip()
                if not line:
                    continue
                tokens = line.split()
                if len(tokens) < 2:
                    raise InputError(
                        f"{path}:{line_no}: expected 'word v1 ... vd'"
                    )
                try:
                    values = tuple(float(t) for t in tokens[1:])
                except ValueError as exc:
                    raise InputError(f"{path}:{line_no}: {exc}") from exc
                if dim is None:
                    dim = len(values)
                elif len(values) != dim:
                    raise InputError(
                        f"{path}:{line_no}: dimension {len(values)} differs "
                        f"from {dim}"
                    )
                vectors[tokens[0].lower()] = values
        if dim is None:
            raise InputError(f"vector file {path} is empty")
        return cls(vectors, dim)

    def mean_vector(self, tokens: Sequence[str]) -> tuple[tuple[float, ...], bool]:
        """Mean of the known token vectors; unknown tokens are skipped.
        Returns the vector and whether every token was unknown."""
        known = [self.vectors[t] for t in tokens if t in self.vectors]
        if not known:
            return tuple(0.0 for _ in range(self.dim)), True
        return (
            tuple(sum(column) / len(known) for column in zip(*known)),
            False,
        )


def _name_tokens(process: Process) -> set[str]:
    return {process.predicate.lemma, process.argument.lemma}


def similarity(
    a: Process,
    b: Process,
    sim: str,
    vectors: Optional[WordVectors],
) -> float:
    if sim == "jaccard":
        return jaccard(_name_tokens(a), _name_tokens(b))
    if sim == "vector":
        if vectors is None:
            raise InputError("vector similarity needs a vector file")
        vec_a, _ = vectors.mean_vector(sorted(_name_tokens(a)))
        vec_b, _ = vectors.mean_vector(sorted(_name_tokens(b)))
        return cosine(vec_a, vec_b)
    raise InputError(f"unknown similarity {sim!r}")


def baseline_top_one(
    process: Process,
    train: list[ProcessGraph],
    sim: str,
    k: int,
    vectors: Optional[WordVectors] = None,
) -> Prediction:
    """First k sub-events of the most similar training process.

    Ties break by lexicographic process name, then by source id.
    """
    if not train:
        raise InputError("top-one baseline needs a non-empty training corpus")
    ranked = sorted(
        train,
        key=lambda graph: (
            -similarity(process, graph.process, sim, vectors),
            graph.process.name,
            graph.source_id,
        ),
    )
    winner = ranked[0]
    return _sequence_prediction(process, winner.steps[:k], k)
