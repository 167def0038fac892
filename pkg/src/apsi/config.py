"""Run configuration shared across the pipeline."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

from .errors import InputError


class MergeStrategy(enum.Enum):
    INSTANTIATION = "instantiation"
    SIMPLE_MERGE = "simple_merge"
    NORMALIZED = "normalized"


class Erouge2Mode(enum.Enum):
    ADJACENT = "adjacent"
    ALL_ORDERED_PAIRS = "all_ordered_pairs"


class Eq4GroupFactor(enum.Enum):
    # The cross-group factor can multiply by (total weight / reference
    # weight) or by its reciprocal; the former is the default.
    AS_PRINTED = "as_printed"
    RECIPROCAL = "reciprocal"


@dataclass(frozen=True)
class Config:
    """Hyper-parameters and behavioral switches.

    w_v and w_n are the per-edge decay factors for verb and noun
    abstraction; depth-d ancestors score w**d.
    """

    w_v: float = 0.5
    w_n: float = 0.5
    max_concept_depth: int = 3
    max_candidates_per_event: int = 1000
    k: int = 4
    merge_strategy: MergeStrategy = MergeStrategy.INSTANTIATION
    erouge2_mode: Erouge2Mode = Erouge2Mode.ADJACENT
    eq4_group_factor: Eq4GroupFactor = Eq4GroupFactor.AS_PRINTED

    def __post_init__(self):
        if not 0.0 <= self.w_v <= 1.0:
            raise InputError(f"w_v must be in [0, 1], got {self.w_v}")
        if not 0.0 <= self.w_n <= 1.0:
            raise InputError(f"w_n must be in [0, 1], got {self.w_n}")
        if self.max_concept_depth < 1:
            raise InputError("max_concept_depth must be positive")
        if self.max_candidates_per_event < 1:
            raise InputError("max_candidates_per_event must be positive")
        if self.k < 1:
            raise InputError("k must be positive")

    def to_json(self) -> dict:
        obj = asdict(self)
        for key, value in obj.items():
            if isinstance(value, enum.Enum):
                obj[key] = value.value
        return obj
