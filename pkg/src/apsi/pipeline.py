"""End-to-end induction pipeline and corpus statistics.

Shared by the command-line interface and the HTTP service: decompose the
training corpus around the target process, conceptualize each side,
score ordering, and merge into a k-step prediction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .baselines import baseline_random
from .config import Config
from .conceptualizer import (
    AbstractRepresentation,
    Side,
    abstract_representation,
)
from .corpus import Process, ProcessGraph, decompose
from .errors import NoAnalogousProcessesError
from .sequencer import Prediction, order_scores, predict_sequence
from .taxonomy import Taxonomy
from .util import parallel_map


def build_representations(
    process: Process,
    train: list[ProcessGraph],
    tax: Taxonomy,
    cfg: Config,
) -> tuple[AbstractRepresentation, AbstractRepresentation]:
    """Abstract representations of the predicate-side and argument-side
    groups, with order scores filled.  Empty groups yield empty
    representations; the merge step decides whether that is fatal."""
    g_p, g_a = decompose(process, train)
    reps = []
    for group, side in ((g_p, Side.PREDICATE_SIDE), (g_a, Side.ARGUMENT_SIDE)):
        if group:
            reps.append(order_scores(abstract_representation(group, side, tax, cfg)))
        else:
            reps.append(AbstractRepresentation((), side, 0))
    return reps[0], reps[1]


def induce_for_process(
    process: Process,
    train: list[ProcessGraph],
    tax: Taxonomy,
    cfg: Config,
    k: Optional[int] = None,
) -> Prediction:
    s_p, s_a = build_representations(process, train, tax, cfg)
    return predict_sequence(process, s_p, s_a, k if k is not None else cfg.k, tax, cfg)


def induce_with_fallback(
    process: Process,
    train: list[ProcessGraph],
    tax: Taxonomy,
    cfg: Config,
    k: Optional[int],
    fallback: Optional[str],
    seed: int,
) -> Prediction:
    """Like induce_for_process, but an empty-both-groups failure can fall
    back to the random baseline when requested."""
    try:
        return induce_for_process(process, train, tax, cfg, k)
    except NoAnalogousProcessesError:
        if fallback != "random":
            raise
        return baseline_random(process, train, k if k is not None else cfg.k, seed)


def majority_reference_length(references: Sequence[Sequence[object]]) -> int:
    """Most common reference length; ties pick the smallest length."""
    counts = Counter(len(ref) for ref in references)
    best = max(counts.values())
    return min(length for length, count in counts.items() if count == best)


def resolve_k(
    reference_sequences: Optional[Sequence[Sequence[object]]],
    per_line_k: Optional[int],
    flag_k: Optional[int],
    fallback_len: int,
) -> int:
    """k precedence for batch induction: majority reference length, then
    the test line's own k, then the --k flag, then the test sequence's
    true length."""
    if reference_sequences:
        return majority_reference_length(reference_sequences)
    if per_line_k is not None:
        return per_line_k
    if flag_k is not None:
        return flag_k
    return fallback_len


@dataclass(frozen=True)
class CorpusStats:
    graph_count: int
    test_graph_count: Optional[int]
    mean_sequence_length: float
    mean_predicate_group_size: Optional[float]
    mean_argument_group_size: Optional[float]
    warning: Optional[str] = None

    def to_json(self) -> dict:
        obj = {
            "train_graphs": self.graph_count,
            "test_graphs": self.test_graph_count,
            "mean_sequence_length": self.mean_sequence_length,
            "mean_predicate_group_size": self.mean_predicate_group_size,
            "mean_argument_group_size": self.mean_argument_group_size,
        }
        if self.warning:
            obj["warning"] = self.warning
        return obj


def corpus_stats(
    train: list[ProcessGraph],
    test: Optional[list[ProcessGraph]] = None,
    threads: int = 1,
) -> CorpusStats:
    """Graph counts, mean sequence length, and (when a test split is
    given) the mean predicate/argument group sizes over test processes."""
    if not train:
        return CorpusStats(0, len(test) if test is not None else None, 0.0,
                           None, None, warning="empty training corpus")
    mean_len = sum(len(g.steps) for g in train) / len(train)
    mean_p = mean_a = None
    if test:
        sizes = parallel_map(
            lambda g: tuple(len(side) for side in decompose(g.process, train)),
            test,
            threads,
        )
        mean_p = sum(p for p, _ in sizes) / len(sizes)
        mean_a = sum(a for _, a in sizes) / len(sizes)
    return CorpusStats(
        len(train),
        len(test) if test is not None else None,
        mean_len,
        mean_p,
        mean_a,
    )
