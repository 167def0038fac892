import pytest

from apsi import (
    Config,
    Eq4GroupFactor,
    MergeStrategy,
    NoAnalogousProcessesError,
    Process,
    decompose,
    instantiate,
    precedence_count,
    predict_sequence,
    order_scores,
    score_instantiation,
)
from apsi.conceptualizer import (
    AbstractEvent,
    AbstractRepresentation,
    Instance,
    Side,
    abstract_representation,
)
from apsi.sequencer import PredictedEvent, Prediction

from build import vn

CFG = Config()


def abstract(event, weight, members, order=0.0):
    return AbstractEvent(event, weight, tuple(members), order)


def rep(events, side=Side.PREDICATE_SIDE, group_size=1):
    return AbstractRepresentation(tuple(events), side, group_size)


def member(gid, idx):
    return Instance(gid, idx, vn("x", "y"))


# ------------------------------------------------------------- ordering

def test_precedence_counts_within_graph_pairs():
    a = abstract(vn("search", "house"), 1.0, [member("g1", 0), member("g2", 0)])
    b = abstract(vn("buy", "house"), 1.0, [member("g1", 1), member("g2", 2)])
    assert precedence_count(a, b) == 2
    assert precedence_count(b, a) == 0


def test_precedence_ignores_cross_graph_pairs():
    a = abstract(vn("search", "house"), 1.0, [member("g1", 0)])
    b = abstract(vn("buy", "house"), 1.0, [member("g2", 1)])
    assert precedence_count(a, b) == 0
    assert precedence_count(b, a) == 0


def test_order_scores_count_strictly_preceded_events():
    events = (
        abstract(vn("search", "house"), 1.0, [member("g1", 0), member("g2", 0)]),
        abstract(vn("inspect", "house"), 1.0, [member("g1", 1), member("g2", 1)]),
        abstract(vn("buy", "house"), 1.0, [member("g1", 2), member("g2", 2)]),
    )
    scored = order_scores(rep(events, group_size=2))
    assert [e.order_score for e in scored.events] == [2.0, 1.0, 0.0]


def test_order_scores_are_zero_on_balanced_precedence():
    # a precedes b in g1, b precedes a in g2: neither strictly leads
    events = (
        abstract(vn("soak", "shirt"), 1.0, [member("g1", 0), member("g2", 1)]),
        abstract(vn("wash", "shirt"), 1.0, [member("g1", 1), member("g2", 0)]),
    )
    scored = order_scores(rep(events, group_size=2))
    assert [e.order_score for e in scored.events] == [0.0, 0.0]


def test_order_scores_on_the_toy_predicate_group(toy_taxonomy, toy_corpus):
    group, _ = decompose(Process.parse("buy+house"), toy_corpus)
    scored = order_scores(
        abstract_representation(group, Side.PREDICATE_SIDE, toy_taxonomy, CFG)
    )
    assert {
        e.concept.canonical_key: e.order_score for e in scored.events
    } == {
        "(search|v,[dobj](building|n))": 5.0,
        "(inspect|v,[dobj](building|n))": 4.0,
        "(buy|v,[dobj](building|n))": 3.0,
        "(clean|v,[dobj](cottage|n))": 0.0,
        "(decorate|v,[dobj](villa|n))": 0.0,
        "(sell|v,[dobj](mansion|n))": 0.0,
    }


# --------------------------------------------------------- instantiation

def test_instantiate_replaces_with_strict_hyponyms(toy_taxonomy):
    out = instantiate(vn("buy", "building"), vn("rent", "house"), toy_taxonomy)
    assert out.canonical_key == "(buy|v,[dobj](house|n))"


def test_instantiate_targets_cut_fruit_with_buy_apple(toy_taxonomy):
    out = instantiate(vn("cut", "fruit"), vn("buy", "apple"), toy_taxonomy)
    assert out.canonical_key == "(cut|v,[dobj](apple|n))"


def test_instantiate_prefers_the_deepest_hyponym(toy_taxonomy):
    from build import ev

    # both fruit (depth 1) and apple (depth 2) sit below food
    ref = ev("eat", ("dobj", "apple", "n"), ("nmod", "fruit", "n"))
    out = instantiate(vn("eat", "food"), ref, toy_taxonomy)
    assert out.canonical_key == "(eat|v,[dobj](apple|n))"


def test_instantiate_breaks_depth_ties_lexicographically(toy_taxonomy):
    from build import ev

    ref = ev("visit", ("dobj", "house", "n"), ("nmod", "cottage", "n"))
    out = instantiate(vn("inspect", "building"), ref, toy_taxonomy)
    assert out.canonical_key == "(inspect|v,[dobj](cottage|n))"


def test_instantiate_replaces_verbs_too(toy_taxonomy):
    out = instantiate(vn("acquire", "food"), vn("buy", "apple"), toy_taxonomy)
    assert out.canonical_key == "(buy|v,[dobj](apple|n))"


def test_instantiate_without_applicable_hyponyms_is_identity(toy_taxonomy):
    event = vn("read", "book")
    assert instantiate(event, vn("buy", "apple"), toy_taxonomy) == event


def test_instantiate_is_idempotent(toy_taxonomy):
    once = instantiate(vn("acquire", "building"), vn("buy", "house"), toy_taxonomy)
    twice = instantiate(once, vn("buy", "house"), toy_taxonomy)
    assert once == twice


def test_instantiate_never_moves_upward(toy_taxonomy):
    # reference words that are hypernyms of the source leave it unchanged
    event = vn("buy", "house")
    out = instantiate(event, vn("acquire", "building"), toy_taxonomy)
    assert out == event


# --------------------------------------------------------------- scoring

def test_score_instantiation_arithmetic(toy_taxonomy):
    source = abstract(vn("buy", "building"), 2.5, [member("g1", 0)], order=3.0)
    reference = abstract(vn("rent", "house"), 1.0, [member("h1", 0)])
    other = rep(
        [
            reference,
            abstract(vn("sell", "house"), 5.0, [member("h2", 0)]),
        ],
        side=Side.ARGUMENT_SIDE,
        group_size=2,
    )
    hat = instantiate(source.concept, reference.concept, toy_taxonomy)
    weight, order = score_instantiation(
        hat, source, other, reference, toy_taxonomy, CFG
    )
    # loss 0.5, group factor 6.0 / 1.0
    assert weight == pytest.approx(2.5 * 0.5 * 6.0, rel=1e-12)
    assert order == pytest.approx(3.0 * 0.5 * 6.0, rel=1e-12)


def test_score_instantiation_reciprocal_variant(toy_taxonomy):
    cfg = Config(eq4_group_factor=Eq4GroupFactor.RECIPROCAL)
    source = abstract(vn("buy", "building"), 2.5, [member("g1", 0)], order=3.0)
    reference = abstract(vn("rent", "house"), 1.0, [member("h1", 0)])
    other = rep([reference, abstract(vn("sell", "house"), 5.0, [member("h2", 0)])],
                side=Side.ARGUMENT_SIDE, group_size=2)
    hat = instantiate(source.concept, reference.concept, toy_taxonomy)
    weight, order = score_instantiation(hat, source, other, reference,
                                        toy_taxonomy, cfg)
    assert weight == pytest.approx(2.5 * 0.5 * (1.0 / 6.0), rel=1e-12)
    assert order == pytest.approx(3.0 * 0.5 * (1.0 / 6.0), rel=1e-12)


def test_identity_instantiation_keeps_full_weight(toy_taxonomy):
    source = abstract(vn("advertise", "house"), 1.0, [member("g1", 0)], order=2.0)
    reference = abstract(vn("buy", "building"), 4.0, [member("h1", 0)])
    other = rep([reference], group_size=1)
    hat = instantiate(source.concept, reference.concept, toy_taxonomy)
    assert hat == source.concept
    weight, order = score_instantiation(hat, source, other, reference,
                                        toy_taxonomy, CFG)
    assert weight == pytest.approx(1.0 * 1.0 * (4.0 / 4.0), rel=1e-12)
    assert order == pytest.approx(2.0, rel=1e-12)


# ------------------------------------------------------- merge and select

def _sides_for(toy_taxonomy, toy_corpus, process_name, cfg=CFG):
    process = Process.parse(process_name)
    g_p, g_a = decompose(process, toy_corpus)
    s_p = (
        order_scores(
            abstract_representation(g_p, Side.PREDICATE_SIDE, toy_taxonomy, cfg)
        )
        if g_p
        else rep([], Side.PREDICATE_SIDE, 0)
    )
    s_a = (
        order_scores(
            abstract_representation(g_a, Side.ARGUMENT_SIDE, toy_taxonomy, cfg)
        )
        if g_a
        else rep([], Side.ARGUMENT_SIDE, 0)
    )
    return process, s_p, s_a


def test_predict_sequence_merges_duplicate_events(toy_taxonomy, toy_corpus):
    process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "buy+house")
    prediction = predict_sequence(process, s_p, s_a, 4, toy_taxonomy, CFG)
    search = [
        e for e in prediction.events
        if e.event.canonical_key == "(search|v,[dobj](house|n))"
    ]
    assert len(search) == 1
    # predicate side contributes 45.0, argument side 44.1
    assert search[0].weight == pytest.approx(89.1, rel=1e-12)


def test_predict_sequence_orders_by_score_then_weight_then_key(
    toy_taxonomy, toy_corpus
):
    process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "buy+house")
    prediction = predict_sequence(process, s_p, s_a, 4, toy_taxonomy, CFG)
    ranks = [
        (-e.order_score, -e.weight, e.event.canonical_key)
        for e in prediction.events
    ]
    assert ranks == sorted(ranks)


def test_weight_is_conserved_by_merging(toy_taxonomy, toy_corpus):
    from apsi.sequencer import _merge_pool

    pool = [
        (vn("a", "b"), 1.5, 2.0),
        (vn("a", "b"), 2.5, 4.0),
        (vn("c", "d"), 3.0, 1.0),
    ]
    merged = _merge_pool(pool)
    assert sum(w for _, w, _ in merged) == pytest.approx(
        sum(w for _, w, _ in pool), rel=1e-12
    )
    by_key = {e.canonical_key: (w, s) for e, w, s in merged}
    assert by_key["(a|v,[dobj](b|n))"] == (4.0, 3.0)
    assert by_key["(c|v,[dobj](d|n))"] == (3.0, 1.0)


def test_single_sided_prediction_passes_events_through(toy_taxonomy, toy_corpus):
    process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "eat+banana")
    assert s_a.events == ()
    prediction = predict_sequence(process, s_p, s_a, 2, toy_taxonomy, CFG)
    by_key = {e.event.canonical_key: e for e in prediction.events}
    source = {e.concept.canonical_key: e for e in s_p.events}
    assert set(by_key) <= set(source)
    for key, predicted in by_key.items():
        assert predicted.weight == pytest.approx(
            source[key].merged_weight, rel=1e-12
        )
        assert predicted.order_score == source[key].order_score


def test_both_sides_empty_raises(toy_taxonomy, toy_corpus):
    process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "fly+kite")
    with pytest.raises(NoAnalogousProcessesError, match="fly\\+kite"):
        predict_sequence(process, s_p, s_a, 3, toy_taxonomy, CFG)


def test_truncated_flag_when_pool_is_small(toy_taxonomy, toy_corpus):
    process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "eat+banana")
    prediction = predict_sequence(process, s_p, s_a, 10, toy_taxonomy, CFG)
    assert prediction.truncated
    assert len(prediction.events) < 10


def test_simple_merge_pools_raw_weights(toy_taxonomy, toy_corpus):
    cfg = Config(merge_strategy=MergeStrategy.SIMPLE_MERGE)
    process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "buy+house", cfg)
    prediction = predict_sequence(process, s_p, s_a, 4, toy_taxonomy, cfg)
    keys = [e.event.canonical_key for e in prediction.events]
    assert "(advertise|v,[dobj](house|n))" in keys
    assert "(buy|v,[dobj](building|n))" in keys
    weights = {e.event.canonical_key: e.weight for e in prediction.events}
    assert weights["(buy|v,[dobj](building|n))"] == pytest.approx(2.5, rel=1e-12)


def test_normalized_divides_by_side_totals(toy_taxonomy, toy_corpus):
    cfg = Config(merge_strategy=MergeStrategy.NORMALIZED)
    process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "buy+house", cfg)
    prediction = predict_sequence(process, s_p, s_a, 20, toy_taxonomy, cfg)
    weights = {e.event.canonical_key: e.weight for e in prediction.events}
    assert weights["(buy|v,[dobj](building|n))"] == pytest.approx(
        2.5 / 10.5, rel=1e-12
    )
    assert weights["(advertise|v,[dobj](house|n))"] == pytest.approx(
        1.0 / 6.0, rel=1e-12
    )


def test_strategies_agree_on_single_sided_processes(toy_taxonomy, toy_corpus):
    # with one empty group, instantiation and simple_merge coincide
    keys = {}
    for strategy in (MergeStrategy.INSTANTIATION, MergeStrategy.SIMPLE_MERGE):
        cfg = Config(merge_strategy=strategy)
        process, s_p, s_a = _sides_for(toy_taxonomy, toy_corpus, "eat+banana", cfg)
        prediction = predict_sequence(process, s_p, s_a, 2, toy_taxonomy, cfg)
        keys[strategy] = [
            (e.event.canonical_key, e.weight, e.order_score)
            for e in prediction.events
        ]
    assert keys[MergeStrategy.INSTANTIATION] == keys[MergeStrategy.SIMPLE_MERGE]


# ------------------------------------------------------------ prediction

def test_prediction_invariants_are_enforced():
    process = Process.parse("buy+house")
    good = (
        PredictedEvent(vn("search", "house"), 1.0, 2.0),
        PredictedEvent(vn("buy", "house"), 1.0, 1.0),
    )
    Prediction(process, good, 2, truncated=False)
    with pytest.raises(ValueError, match="order-score order"):
        Prediction(process, tuple(reversed(good)), 2, truncated=False)
    with pytest.raises(ValueError, match="truncated flag"):
        Prediction(process, good, 3, truncated=False)


def test_prediction_json_defaults_id_to_process_name():
    process = Process.parse("buy+house")
    prediction = Prediction(
        process,
        (PredictedEvent(vn("search", "house"), 1.0, 2.0),),
        1,
        truncated=False,
    )
    obj = prediction.to_json()
    assert obj["id"] == "buy+house"
    assert obj["predicate"] == "buy"
    assert obj["argument"] == "house"
    assert obj["k"] == 1
    assert obj["truncated"] is False
    assert obj["events"][0]["weight"] == 1.0
    assert prediction.to_json("custom")["id"] == "custom"
