"""Event conceptualization by weighted mutually exclusive set cover.

Every sub-event instance admits candidate conceptualizations formed by
replacing its noun/verb words with hypernym ancestors.  A candidate
concept C covers an instance E with score
F(E, C) = prod_i w**depth(w_i^E, w_i^C), w being w_v at verb positions
and w_n at noun positions.  Candidate sets are weighted
W = 1 / sum_E F(E, C), and a greedy loop repeatedly picks the minimum-W
set over the remaining instances until all are covered.  Merging the
chosen sets per concept yields the abstract representation of a process
group, each event carrying merged weight W-bar = sum F = 1/W.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .config import Config
from .corpus import EventGraph, ProcessGraph, aligned_words, iter_instances
from .errors import InputError
from .taxonomy import Taxonomy
from .words import Pos, Word

# Ceiling on the per-event cross-product enumeration; far above
# max_candidates_per_event so truncation stays effectively F-exact.
_PRODUCT_CAP = 100_000


class Side(enum.Enum):
    PREDICATE_SIDE = "predicate_side"
    ARGUMENT_SIDE = "argument_side"


class Instance(NamedTuple):
    """One sub-event occurrence: (graph id, step index, event)."""

    graph_id: str
    step_index: int
    event: EventGraph


@dataclass(frozen=True)
class CandidateSet:
    concept: EventGraph
    members: tuple[Instance, ...]
    weight: float


@dataclass(frozen=True)
class AbstractEvent:
    concept: EventGraph
    merged_weight: float
    members: tuple[Instance, ...]
    order_score: float = 0.0


@dataclass(frozen=True)
class AbstractRepresentation:
    events: tuple[AbstractEvent, ...]
    side: Side
    group_size: int

    @property
    def total_weight(self) -> float:
        return sum(event.merged_weight for event in self.events)

    def to_json(self) -> dict:
        return {
            "side": self.side.value,
            "group_size": self.group_size,
            "events": [
                {
                    "event": event.concept.canonical_key,
                    "graph": event.concept.to_json(),
                    "weight": event.merged_weight,
                    "order_score": event.order_score,
                    "members": [
                        [inst.graph_id, inst.step_index] for inst in event.members
                    ],
                }
                for event in self.events
            ],
        }


def _position_weight(pos: Pos, cfg: Config) -> float:
    return cfg.w_v if pos is Pos.VERB else cfg.w_n


def coverage_score(
    e: EventGraph, c: EventGraph, tax: Taxonomy, cfg: Config
) -> float:
    """F(E, C) under the canonical alignment; 0.0 when the shapes differ
    or any position's concept word is not an ancestor of the instance
    word."""
    pairs = aligned_words(e, c)
    if pairs is None:
        return 0.0
    score = 1.0
    for word_e, word_c in pairs:
        if word_e == word_c:
            continue
        if word_e.pos not in (Pos.NOUN, Pos.VERB):
            return 0.0
        depth = tax.depth(word_e, word_c)
        if depth is None:
            return 0.0
        score *= _position_weight(word_e.pos, cfg) ** depth
        if score == 0.0:
            return 0.0
    return score


def concept_score(
    e: EventGraph, c: EventGraph, tax: Taxonomy, cfg: Config
) -> float:
    """F(E, C) for a position-aligned concept; error on shape mismatch."""
    if aligned_words(e, c) is None:
        raise InputError(
            f"concept {c.canonical_key} is not shape-aligned with event "
            f"{e.canonical_key}"
        )
    return coverage_score(e, c, tax, cfg)


def candidates(e: EventGraph, tax: Taxonomy, cfg: Config) -> list[EventGraph]:
    """Candidate conceptualizations of ``e``: the cross-product of
    per-word choices (the word itself or any ancestor within
    max_concept_depth; noun/verb positions only).  Always contains ``e``;
    sorted by descending F(e, .), ties by canonical_key; truncated to
    max_candidates_per_event."""
    choice_lists: list[tuple[int, list[Word]]] = []
    for nid, word in e.nodes:
        if word.pos in (Pos.NOUN, Pos.VERB):
            found = tax.ancestors(word, cfg.max_concept_depth)
            ranked = sorted(found.items(), key=lambda kv: (kv[1], kv[0].lemma))
            options = [word] + [ancestor for ancestor, _ in ranked]
        else:
            options = [word]
        choice_lists.append((nid, options))

    # Keep the enumeration tractable; shallow (high-F) choices survive.
    def product_size() -> int:
        size = 1
        for _, options in choice_lists:
            size *= len(options)
        return size

    while product_size() > _PRODUCT_CAP:
        nid, options = max(choice_lists, key=lambda item: len(item[1]))
        options.pop()

    by_key: dict[str, EventGraph] = {}
    for combo in itertools.product(*(options for _, options in choice_lists)):
        replacements = {
            nid: chosen
            for (nid, _), chosen in zip(choice_lists, combo)
        }
        concept = e.replace_words(replacements)
        by_key.setdefault(concept.canonical_key, concept)

    ordered = sorted(
        by_key.values(),
        key=lambda c: (-coverage_score(e, c, tax, cfg), c.canonical_key),
    )
    ordered = ordered[: cfg.max_candidates_per_event]
    if all(c.canonical_key != e.canonical_key for c in ordered):
        ordered[-1] = e
    return ordered


def set_weight(
    members: Iterable[Instance],
    concept: EventGraph,
    tax: Taxonomy,
    cfg: Config,
) -> float:
    """W = 1 / sum of member scores."""
    total = 0.0
    count = 0
    for inst in members:
        score = coverage_score(inst.event, concept, tax, cfg)
        if score <= 0.0:
            raise InputError(
                f"instance {inst.graph_id}:{inst.step_index} is not covered "
                f"by concept {concept.canonical_key}"
            )
        total += score
        count += 1
    if count == 0:
        raise InputError("cannot weight an empty candidate set")
    return 1.0 / total


class _CoverScorer:
    """Caches per-event candidate lists and pairwise F scores."""

    def __init__(self, tax: Taxonomy, cfg: Config):
        self.tax = tax
        self.cfg = cfg
        self._candidates: dict[str, list[EventGraph]] = {}
        self._scores: dict[tuple[str, str], float] = {}

    def candidates_for(self, event: EventGraph) -> list[EventGraph]:
        cached = self._candidates.get(event.canonical_key)
        if cached is None:
            cached = candidates(event, self.tax, self.cfg)
            self._candidates[event.canonical_key] = cached
        return cached

    def score(self, event: EventGraph, concept: EventGraph) -> float:
        key = (event.canonical_key, concept.canonical_key)
        cached = self._scores.get(key)
        if cached is None:
            cached = coverage_score(event, concept, self.tax, self.cfg)
            self._scores[key] = cached
        return cached


def greedy_cover(
    instances: Iterable[Instance], tax: Taxonomy, cfg: Config
) -> list[CandidateSet]:
    """Greedy minimum-W mutually exclusive set cover.

    Each round regenerates candidate sets over the remaining instances,
    keeps those with at least one positively scored member, and selects
    the lowest-W set (ties: larger member set, then smaller concept
    canonical_key).  Identity candidates guarantee termination.
    """
    remaining = list(instances)
    if not remaining:
        raise InputError("cannot cover an empty instance multiset")
    scorer = _CoverScorer(tax, cfg)
    chosen: list[CandidateSet] = []
    while remaining:
        concepts: dict[str, EventGraph] = {}
        for inst in remaining:
            for concept in scorer.candidates_for(inst.event):
                concepts.setdefault(concept.canonical_key, concept)
        best: Optional[tuple[tuple, EventGraph, list[Instance]]] = None
        for key in sorted(concepts):
            concept = concepts[key]
            members = []
            total = 0.0
            for inst in remaining:
                score = scorer.score(inst.event, concept)
                if score > 0.0:
                    members.append(inst)
                    total += score
            if not members:
                continue
            rank = (1.0 / total, -len(members), key)
            if best is None or rank < best[0]:
                best = (rank, concept, members)
        assert best is not None, "identity candidates guarantee coverage"
        rank, concept, members = best
        chosen.append(CandidateSet(concept, tuple(members), rank[0]))
        taken = {(inst.graph_id, inst.step_index) for inst in members}
        remaining = [
            inst
            for inst in remaining
            if (inst.graph_id, inst.step_index) not in taken
        ]
    return chosen


def abstract_representation(
    group: list[ProcessGraph], side: Side, tax: Taxonomy, cfg: Config
) -> AbstractRepresentation:
    """Conceptualize all sub-events of a process group.

    Cover sets sharing a concept are merged; merged weight is the total
    member score sum F (the reciprocal of the set weight W).
    """
    if not group:
        raise InputError(
            f"no analogous processes on the {side.value.replace('_', ' ')}"
        )
    instances = [Instance(*item) for item in iter_instances(group)]
    merged: dict[str, tuple[EventGraph, list[Instance], float]] = {}
    order: list[str] = []
    for cover_set in greedy_cover(instances, tax, cfg):
        key = cover_set.concept.canonical_key
        if key not in merged:
            merged[key] = (cover_set.concept, [], 0.0)
            order.append(key)
        concept, members, total = merged[key]
        merged[key] = (
            concept,
            members + list(cover_set.members),
            total + 1.0 / cover_set.weight,
        )
    events = tuple(
        AbstractEvent(concept, total, tuple(members))
        for concept, members, total in (merged[key] for key in order)
    )
    return AbstractRepresentation(events, side, len(group))
