"""Event-level ROUGE metrics over predicted sub-event sequences.

erouge1 is the percentage of predicted events matched by at least one
reference event; erouge2 the percentage of predicted event pairs covered
by a reference pair in the same temporal order.  Matching standards:
``string`` (canonical-key equality) and ``hypernym`` (same dependency
shape, every aligned word pair equal or hypernym-related in either
direction).  Settings: ``basic`` projects both sides to the root verb
first; ``advanced`` keeps all words.  Both metrics are coverage of the
*prediction* by the references, in [0, 100].
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .config import Erouge2Mode
from .corpus import EventGraph, Process, aligned_words
from .errors import CorpusError, InputError
from .taxonomy import Taxonomy
from .util import parallel_map
from .words import Pos, Word


class MatchStandard(enum.Enum):
    STRING = "string"
    HYPERNYM = "hypernym"


class Setting(enum.Enum):
    BASIC = "basic"
    ADVANCED = "advanced"


@dataclass(frozen=True)
class ReferenceSet:
    process: Process
    references: tuple[tuple[EventGraph, ...], ...]
    source_id: str

    def __post_init__(self):
        if not self.references:
            raise CorpusError(f"reference set {self.source_id!r} is empty")
        if any(not ref for ref in self.references):
            raise CorpusError(
                f"reference set {self.source_id!r} contains an empty sequence"
            )


def match_event(
    pred: EventGraph,
    ref: EventGraph,
    standard: MatchStandard,
    tax: Taxonomy,
) -> bool:
    if standard is MatchStandard.STRING:
        return pred.canonical_key == ref.canonical_key
    pairs = aligned_words(pred, ref)
    if pairs is None:
        return False
    for a, b in pairs:
        if a == b:
            continue
        if not (tax.is_hyponym(a, b) or tax.is_hyponym(b, a)):
            return False
    return True


def _project(
    events: Sequence[EventGraph], setting: Setting
) -> list[EventGraph]:
    if setting is Setting.BASIC:
        return [event.project_to_verb() for event in events]
    return list(events)


def erouge1(
    prediction: Sequence[EventGraph],
    references: Sequence[Sequence[EventGraph]],
    standard: MatchStandard,
    setting: Setting,
    tax: Taxonomy,
) -> float:
    """Percentage of predicted events matched by any reference event."""
    matched, total = erouge1_counts(prediction, references, standard, setting, tax)
    return 100.0 * matched / total


def erouge1_counts(
    prediction: Sequence[EventGraph],
    references: Sequence[Sequence[EventGraph]],
    standard: MatchStandard,
    setting: Setting,
    tax: Taxonomy,
) -> tuple[int, int]:
    if not prediction:
        raise InputError("cannot score an empty prediction")
    pred = _project(prediction, setting)
    refs = [_project(ref, setting) for ref in references]
    matched = sum(
        1
        for event in pred
        if any(
            match_event(event, ref_event, standard, tax)
            for ref in refs
            for ref_event in ref
        )
    )
    return matched, len(pred)


def _pairs(
    events: Sequence[EventGraph], mode: Erouge2Mode
) -> list[tuple[EventGraph, EventGraph]]:
    if mode is Erouge2Mode.ADJACENT:
        return [(events[i], events[i + 1]) for i in range(len(events) - 1)]
    return [
        (events[i], events[j])
        for i in range(len(events))
        for j in range(i + 1, len(events))
    ]


def erouge2(
    prediction: Sequence[EventGraph],
    references: Sequence[Sequence[EventGraph]],
    standard: MatchStandard,
    setting: Setting,
    tax: Taxonomy,
    mode: Erouge2Mode = Erouge2Mode.ADJACENT,
) -> float:
    """Percentage of predicted event pairs covered order-preserving by
    some reference; 0.0 for predictions shorter than two events."""
    matched, total = erouge2_counts(
        prediction, references, standard, setting, tax, mode
    )
    if total == 0:
        return 0.0
    return 100.0 * matched / total


def erouge2_counts(
    prediction: Sequence[EventGraph],
    references: Sequence[Sequence[EventGraph]],
    standard: MatchStandard,
    setting: Setting,
    tax: Taxonomy,
    mode: Erouge2Mode = Erouge2Mode.ADJACENT,
) -> tuple[int, int]:
    if not prediction:
        raise InputError("cannot score an empty prediction")
    pred = _project(prediction, setting)
    refs = [_project(ref, setting) for ref in references]
    pred_pairs = _pairs(pred, mode)
    ref_pairs = [pair for ref in refs for pair in _pairs(ref, mode)]
    matched = sum(
        1
        for first, second in pred_pairs
        if any(
            match_event(first, ref_first, standard, tax)
            and match_event(second, ref_second, standard, tax)
            for ref_first, ref_second in ref_pairs
        )
    )
    return matched, len(pred_pairs)


@dataclass(frozen=True)
class ComboScores:
    erouge1: float
    erouge2: float
    matched_events: int
    total_events: int
    matched_pairs: int
    total_pairs: int
    short_prediction: bool

    def to_json(self) -> dict:
        return {
            "erouge1": self.erouge1,
            "erouge2": self.erouge2,
            "matched_events": self.matched_events,
            "total_events": self.total_events,
            "matched_pairs": self.matched_pairs,
            "total_pairs": self.total_pairs,
            "short_prediction": self.short_prediction,
        }


@dataclass(frozen=True)
class Report:
    """Per-process and corpus-mean scores for the requested
    (standard, setting) combinations."""

    combos: tuple[tuple[MatchStandard, Setting], ...]
    processes: tuple[tuple[str, dict[str, ComboScores]], ...]
    erouge2_mode: Erouge2Mode

    @staticmethod
    def combo_key(standard: MatchStandard, setting: Setting) -> str:
        return f"{standard.value}/{setting.value}"

    def mean(self) -> dict[str, dict[str, float]]:
        out: dict[str, dict[str, float]] = {}
        for standard, setting in self.combos:
            key = self.combo_key(standard, setting)
            scores = [entries[key] for _, entries in self.processes]
            out[key] = {
                "erouge1": sum(s.erouge1 for s in scores) / len(scores),
                "erouge2": sum(s.erouge2 for s in scores) / len(scores),
            }
        return out

    def to_json(self) -> dict:
        return {
            "erouge2_mode": self.erouge2_mode.value,
            "process_count": len(self.processes),
            "mean": self.mean(),
            "processes": [
                {
                    "id": process_id,
                    "scores": {key: s.to_json() for key, s in entries.items()},
                }
                for process_id, entries in self.processes
            ],
        }

    def to_markdown(self) -> str:
        lines = [
            "| Standard | Setting | E-ROUGE1 | E-ROUGE2 |",
            "| --- | --- | --- | --- |",
        ]
        mean = self.mean()
        for standard, setting in self.combos:
            key = self.combo_key(standard, setting)
            lines.append(
                f"| {standard.value} | {setting.value} "
                f"| {mean[key]['erouge1']:.4f} | {mean[key]['erouge2']:.4f} |"
            )
        return "\n".join(lines) + "\n"


def build_report(
    predictions: Sequence[tuple[str, Sequence[EventGraph]]],
    references: Sequence[tuple[str, Sequence[Sequence[EventGraph]]]],
    tax: Taxonomy,
    standards: Iterable[MatchStandard] = tuple(MatchStandard),
    settings: Iterable[Setting] = tuple(Setting),
    mode: Erouge2Mode = Erouge2Mode.ADJACENT,
    threads: int = 1,
) -> Report:
    """Score id-aligned predictions against references.

    A process-id mismatch between the two files is an error listing the
    ids missing on each side.
    """
    pred_ids = [pid for pid, _ in predictions]
    ref_map = {rid: refs for rid, refs in references}
    missing_refs = sorted(set(pred_ids) - set(ref_map))
    missing_preds = sorted(set(ref_map) - set(pred_ids))
    if missing_refs or missing_preds:
        raise InputError(
            "prediction/reference process sets differ: "
            f"missing references for {missing_refs}, "
            f"missing predictions for {missing_preds}"
        )
    combos = tuple(
        (standard, setting)
        for standard in standards
        for setting in settings
    )

    def score_one(
        item: tuple[str, Sequence[EventGraph]]
    ) -> tuple[str, dict[str, ComboScores]]:
        process_id, events = item
        refs = ref_map[process_id]
        entries: dict[str, ComboScores] = {}
        for standard, setting in combos:
            matched_events, total_events = erouge1_counts(
                events, refs, standard, setting, tax
            )
            matched_pairs, total_pairs = erouge2_counts(
                events, refs, standard, setting, tax, mode
            )
            entries[Report.combo_key(standard, setting)] = ComboScores(
                erouge1=100.0 * matched_events / total_events,
                erouge2=(
                    100.0 * matched_pairs / total_pairs if total_pairs else 0.0
                ),
                matched_events=matched_events,
                total_events=total_events,
                matched_pairs=matched_pairs,
                total_pairs=total_pairs,
                short_prediction=len(events) < 2,
            )
        return process_id, entries

    rows = parallel_map(score_one, predictions, threads)
    if not rows:
        raise InputError("no processes to evaluate")
    return Report(combos, tuple(rows), mode)


def parse_reference_file(lines: Iterable[str], source: str) -> list[ReferenceSet]:
    """Parse JSON-lines references: one object per process with
    ``references`` holding one or more step sequences."""
    out = []
    seen: set[str] = set()
    for line_no, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        where = f"{source}:{line_no}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{where}: malformed JSON: {exc}") from exc
        for key in ("id", "predicate", "argument", "references"):
            if key not in obj:
                raise CorpusError(f"{where}: missing key {key!r}")
        source_id = str(obj["id"])
        if source_id in seen:
            raise CorpusError(f"{where}: duplicate id {source_id!r}")
        seen.add(source_id)
        process = Process(
            Word.make(str(obj["predicate"]), Pos.VERB),
            Word.make(str(obj["argument"]), Pos.NOUN),
        )
        refs_obj = obj["references"]
        if not isinstance(refs_obj, list) or not refs_obj:
            raise CorpusError(f"{where}: references must be a non-empty list")
        references = []
        for ref_index, ref in enumerate(refs_obj):
            if not isinstance(ref, list) or not ref:
                raise CorpusError(
                    f"{where}: reference {ref_index} must be a non-empty list"
                )
            references.append(
                tuple(
                    EventGraph.from_json(
                        step, where=f"{where}: reference {ref_index} step {i}"
                    )
                    for i, step in enumerate(ref)
                )
            )
        out.append(ReferenceSet(process, tuple(references), source_id))
    return out


def load_references(path: str) -> list[ReferenceSet]:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_reference_file(handle, source=str(path))
    except OSError as exc:
        raise CorpusError(f"cannot read references {path}: {exc}") from exc
