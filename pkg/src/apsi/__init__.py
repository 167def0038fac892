"""Analogy-based prediction of ordered sub-event sequences.

Given a corpus of process graphs (each a "predicate+argument" process
with a temporally ordered list of verb-rooted dependency events) and a
hypernym taxonomy, the pipeline predicts a k-step sub-event sequence for
an unseen process: it abstracts the processes sharing the predicate and
the ones sharing the argument into weighted conceptualized events, then
cross-instantiates and merges the two sides.  Event-level ROUGE metrics
and two baselines round out the toolkit.
"""

__version__ = "0.1.0"

from .config import Config, Eq4GroupFactor, Erouge2Mode, MergeStrategy
from .corpus import (
    EventGraph,
    Process,
    ProcessGraph,
    decompose,
    load_corpus,
    parse_corpus,
)
from .conceptualizer import (
    AbstractEvent,
    AbstractRepresentation,
    Side,
    abstract_representation,
    candidates,
    concept_score,
    greedy_cover,
    set_weight,
)
from .errors import (
    ApsiError,
    CorpusError,
    InputError,
    NoAnalogousProcessesError,
    TaxonomyError,
)
from .evaluator import (
    MatchStandard,
    ReferenceSet,
    Setting,
    build_report,
    erouge1,
    erouge2,
    match_event,
)
from .baselines import WordVectors, baseline_random, baseline_top_one
from .pipeline import corpus_stats, induce_for_process, majority_reference_length
from .sequencer import (
    PredictedEvent,
    Prediction,
    instantiate,
    order_scores,
    precedence_count,
    predict_sequence,
    score_instantiation,
)
from .taxonomy import Taxonomy, load_taxonomy, load_tsv, load_wordnet
from .words import Pos, Word

__all__ = [
    "AbstractEvent",
    "AbstractRepresentation",
    "ApsiError",
    "Config",
    "CorpusError",
    "Eq4GroupFactor",
    "Erouge2Mode",
    "EventGraph",
    "InputError",
    "MatchStandard",
    "MergeStrategy",
    "NoAnalogousProcessesError",
    "Pos",
    "PredictedEvent",
    "Prediction",
    "Process",
    "ProcessGraph",
    "ReferenceSet",
    "Setting",
    "Side",
    "Taxonomy",
    "TaxonomyError",
    "Word",
    "WordVectors",
    "abstract_representation",
    "baseline_random",
    "baseline_top_one",
    "build_report",
    "candidates",
    "concept_score",
    "corpus_stats",
    "decompose",
    "erouge1",
    "erouge2",
    "greedy_cover",
    "induce_for_process",
    "instantiate",
    "load_corpus",
    "load_taxonomy",
    "load_tsv",
    "load_wordnet",
    "majority_reference_length",
    "match_event",
    "order_scores",
    "parse_corpus",
    "precedence_count",
    "predict_sequence",
    "score_instantiation",
    "set_weight",
    "__version__",
]
