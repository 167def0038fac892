"""Ordering, cross-group instantiation, and final sequence selection.

Order scores count, per conceptualized event C, how many other events C
strictly tends to precede: T(C) = sum over C' of step(t(C, C') - t(C', C))
where t counts instance pairs within one process graph whose step indices
are in order, and step(x) = 1 only for x > 0.

Instantiation replaces each noun/verb word of a concept from one group by
the deepest strict hyponym found among the reference concept's same-pos
words from the other group, repeating passes to a fixed point.  The
resulting event inherits the source event's weight and order score scaled
by the semantic-loss factor F and a cross-group factor
(total other-side weight / reference weight).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Optional

from .config import Config, Eq4GroupFactor, MergeStrategy
from .conceptualizer import (
    AbstractEvent,
    AbstractRepresentation,
    coverage_score,
)
from .corpus import EventGraph, Process
from .errors import NoAnalogousProcessesError
from .taxonomy import Taxonomy
from .words import Pos


@dataclass(frozen=True)
class PredictedEvent:
    event: EventGraph
    weight: float
    order_score: float

    def to_json(self) -> dict:
        obj = self.event.to_json()
        obj["weight"] = self.weight
        obj["order_score"] = self.order_score
        return obj


@dataclass(frozen=True)
class Prediction:
    process: Process
    events: tuple[PredictedEvent, ...]
    requested_k: int
    truncated: bool

    def __post_init__(self):
        ranks = [
            (-e.order_score, -e.weight, e.event.canonical_key)
            for e in self.events
        ]
        if ranks != sorted(ranks):
            raise ValueError("prediction events are not in order-score order")
        if self.truncated != (len(self.events) < self.requested_k):
            raise ValueError("truncated flag does not match event count")

    def event_graphs(self) -> list[EventGraph]:
        return [e.event for e in self.events]

    def to_json(self, source_id: Optional[str] = None) -> dict:
        return {
            "id": source_id if source_id is not None else self.process.name,
            "predicate": self.process.predicate.lemma,
            "argument": self.process.argument.lemma,
            "k": self.requested_k,
            "truncated": self.truncated,
            "events": [e.to_json() for e in self.events],
        }


def precedence_count(a: AbstractEvent, b: AbstractEvent) -> int:
    """t(a, b): member-instance pairs of one process graph with a's step
    strictly before b's step."""
    steps_b: dict[str, list[int]] = defaultdict(list)
    for inst in b.members:
        steps_b[inst.graph_id].append(inst.step_index)
    count = 0
    for inst in a.members:
        count += sum(
            1 for step in steps_b.get(inst.graph_id, []) if inst.step_index < step
        )
    return count


def order_scores(rep: AbstractRepresentation) -> AbstractRepresentation:
    """Fill T(C) for every event of the representation."""
    events = rep.events
    t = [
        [precedence_count(a, b) for b in events]
        for a in events
    ]
    scored = []
    for i, event in enumerate(events):
        score = sum(
            1 for j in range(len(events)) if t[i][j] - t[j][i] > 0
        )
        scored.append(replace(event, order_score=float(score)))
    return replace(rep, events=tuple(scored))


def instantiate(
    c_from: EventGraph, c_ref: EventGraph, tax: Taxonomy
) -> EventGraph:
    """Specialize ``c_from`` with hyponyms drawn from ``c_ref``'s words.

    Per noun/verb position, the replacement is the strict hyponym with
    maximal depth below the current word (ties: lexicographic lemma).
    Passes repeat until nothing changes; strict descent in an acyclic
    taxonomy guarantees termination.
    """
    ref_words = sorted(set(c_ref.words), key=lambda w: w.sort_key)
    current = c_from
    while True:
        replacements = {}
        for nid, word in current.nodes:
            if word.pos not in (Pos.NOUN, Pos.VERB):
                continue
            best = None
            for ref_word in ref_words:
                if ref_word.pos is not word.pos:
                    continue
                if not tax.is_hyponym(ref_word, word):
                    continue
                rank = (-tax.depth(ref_word, word), ref_word.lemma)
                if best is None or rank < best[0]:
                    best = (rank, ref_word)
            if best is not None:
                replacements[nid] = best[1]
        if not replacements:
            return current
        current = current.replace_words(replacements)


def score_instantiation(
    instantiated: EventGraph,
    source: AbstractEvent,
    other_side: AbstractRepresentation,
    reference: AbstractEvent,
    tax: Taxonomy,
    cfg: Config,
) -> tuple[float, float]:
    """Weight and order score of an instantiated event.

    Both inherit from the source event, scaled by the semantic-loss
    factor F(instantiated, source) and by the cross-group factor
    (other-side total weight / reference weight), or its reciprocal under
    the corresponding config variant.
    """
    loss = coverage_score(instantiated, source.concept, tax, cfg)
    total = other_side.total_weight
    if cfg.eq4_group_factor is Eq4GroupFactor.AS_PRINTED:
        group = total / reference.merged_weight
    else:
        group = reference.merged_weight / total
    weight = source.merged_weight * loss * group
    order = source.order_score * loss * group
    return weight, order


def _merge_pool(
    pool: list[tuple[EventGraph, float, float]]
) -> list[tuple[EventGraph, float, float]]:
    """Merge same-keyed events: weights sum, order scores average."""
    merged: dict[str, tuple[EventGraph, float, list[float]]] = {}
    order: list[str] = []
    for event, weight, score in pool:
        key = event.canonical_key
        if key not in merged:
            merged[key] = (event, 0.0, [])
            order.append(key)
        kept, total, scores = merged[key]
        merged[key] = (kept, total + weight, scores + [score])
    return [
        (event, total, sum(scores) / len(scores))
        for event, total, scores in (merged[key] for key in order)
    ]


def predict_sequence(
    process: Process,
    s_p: AbstractRepresentation,
    s_a: AbstractRepresentation,
    k: int,
    tax: Taxonomy,
    cfg: Config,
) -> Prediction:
    """Merge the two abstract representations into a k-step prediction.

    instantiation: every cross-side concept pair instantiates in both
    directions; duplicates merge; top k by weight; final order by
    descending order score.  simple_merge: pool the raw events.
    normalized: pool with each side's weights divided by the side total.
    A single empty side passes the other side through unchanged.
    """
    if not s_p.events and not s_a.events:
        raise NoAnalogousProcessesError(
            process.predicate.lemma, process.argument.lemma
        )
    pool: list[tuple[EventGraph, float, float]] = []
    if cfg.merge_strategy is MergeStrategy.INSTANTIATION:
        if s_p.events and s_a.events:
            for event_p in s_p.events:
                for event_a in s_a.events:
                    hat_p = instantiate(event_p.concept, event_a.concept, tax)
                    pool.append(
                        (hat_p,)
                        + score_instantiation(hat_p, event_p, s_a, event_a, tax, cfg)
                    )
                    hat_a = instantiate(event_a.concept, event_p.concept, tax)
                    pool.append(
                        (hat_a,)
                        + score_instantiation(hat_a, event_a, s_p, event_p, tax, cfg)
                    )
        else:
            present = s_p if s_p.events else s_a
            for event in present.events:
                pool.append((event.concept, event.merged_weight, event.order_score))
    elif cfg.merge_strategy is MergeStrategy.SIMPLE_MERGE:
        for rep in (s_p, s_a):
            for event in rep.events:
                pool.append((event.concept, event.merged_weight, event.order_score))
    else:  # normalized
        for rep in (s_p, s_a):
            total = rep.total_weight
            for event in rep.events:
                pool.append(
                    (event.concept, event.merged_weight / total, event.order_score)
                )
    merged = _merge_pool(pool)
    by_weight = sorted(merged, key=lambda item: (-item[1], item[0].canonical_key))
    selected = by_weight[:k]
    final = sorted(
        selected,
        key=lambda item: (-item[2], -item[1], item[0].canonical_key),
    )
    events = tuple(
        PredictedEvent(event, weight, score) for event, weight, score in final
    )
    return Prediction(process, events, k, truncated=len(events) < k)
