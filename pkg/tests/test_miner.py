import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from dcrmine import dcr
from dcrmine.abstractions import LogAbstractions, build_abstractions
from dcrmine.log_io import EventLog, parse_txt
from dcrmine.miner import (
    MinerConfig,
    RelationSet,
    limited_replay_blockers,
    mine,
    run_pipeline,
    stage_additional_conditions,
    stage_additional_excludes,
    stage_not_chain_succession,
    stage_remove_redundant_excludes,
    stage_templates,
    stage_transitive_reductions,
)


def log_of(*traces):
    return EventLog.from_sequences([list(t) for t in traces])


def named(log, pairs):
    n = log.alphabet.names
    return {n[s] + n[t] for s, t in pairs}


def fits(graph, log):
    return all(graph.accepts(t.events) for t in log.traces)


# templates


def test_templates_l1():
    log = log_of("abc", "ac")
    rels = stage_templates(build_abstractions(log))
    assert named(log, rels.exclude) >= {"aa", "bb", "cc"}
    assert named(log, rels.include) >= {"ab"}
    assert named(log, rels.condition) == {"ab", "ac"}
    assert named(log, rels.response) == {"ac", "bc"}


def test_templates_repeated_activity_not_self_excluded():
    log = log_of("aa")
    assert (0, 0) not in stage_templates(build_abstractions(log)).exclude


def test_templates_single_event():
    rels = stage_templates(build_abstractions(log_of("a")))
    assert rels.response == set() and rels.condition == set()
    assert rels.exclude == {(0, 0)}


def test_templates_cartesian_variant():
    log = log_of("ab")
    rels = stage_templates(build_abstractions(log), MinerConfig(self_exclusion_only=False))
    assert named(log, rels.exclude) >= {"aa", "ab", "ba", "bb"}


# additional excludes


def run_to(stage, log):
    abs_ = build_abstractions(log)
    rels = stage_templates(abs_)
    if stage >= 3:
        rels = stage_additional_excludes(abs_, rels)
    if stage >= 4:
        rels = stage_not_chain_succession(abs_, rels)
    return abs_, rels


def test_never_together_excludes_both_ways():
    log = log_of("a", "b")
    _, rels = run_to(3, log)
    assert named(log, rels.exclude) >= {"ab", "ba"}


def test_not_succession_blocked_by_self_exclusion():
    log = log_of("ab")
    _, rels = run_to(3, log)
    assert "ba" not in named(log, rels.exclude)


def test_not_succession_fires_without_self_exclusion():
    # a occurs twice so it is not self-excluded; b follows a and is never followed by a
    log = log_of("aab")
    _, rels = run_to(3, log)
    assert "ba" in named(log, rels.exclude)


def test_both_orders_seen_adds_nothing():
    log = log_of("ab", "ba")
    abs_ = build_abstractions(log)
    before = stage_templates(abs_)
    after = stage_additional_excludes(abs_, before)
    assert after.exclude == before.exclude


def test_one_exclusion_per_target_per_family():
    # a, b and c never co-occur: targets get exactly one excluder each from not-coexistence
    log = log_of("a", "b", "c")
    abs_ = build_abstractions(log)
    before = stage_templates(abs_)
    added = stage_additional_excludes(abs_, before).exclude - before.exclude
    assert named(log, added) == {"ab", "ba", "ac"}


# not chain succession


def test_not_chain_succession_excludes_and_reincludes():
    log = log_of("sut")
    s, u, t = 0, 1, 2
    _, rels = run_to(4, log)
    assert (s, t) in rels.exclude
    assert (u, t) in rels.include


def test_adjacent_pair_not_excluded():
    log = log_of("st")
    abs_, before = run_to(3, log)
    after = stage_not_chain_succession(abs_, before)
    assert (0, 1) not in after.exclude


def test_self_pair_non_adjacent():
    log = log_of("aba")
    _, rels = run_to(4, log)
    assert (0, 0) in rels.exclude
    assert (1, 0) in rels.include


def test_conflicting_include_is_dropped_and_recorded():
    rels = RelationSet(exclude={(0, 1)})
    rels.add_include((0, 1), "x")
    assert rels.include == set()
    assert rels.dropped[0].relation == "include" and rels.dropped[0].pair == (0, 1)


# redundant excludes


def abstractions_with_alternate(n, alt_pairs):
    alt = [0] * n
    for s, t in alt_pairs:
        alt[t] |= 1 << s
    z = (0,) * n
    return LogAbstractions(
        n=n,
        at_most_once=0,
        precedence_for=tuple(alt),
        alternate_precedence_for=tuple(alt),
        chain_precedence_for=z,
        response_to=z,
        predecessor=z,
        successor=z,
        immediately_follows=z,
        between_for=z,
    )


def test_redundant_exclude_removed():
    r, s, t = 0, 1, 2
    abs_ = abstractions_with_alternate(3, {(r, s)})
    out = stage_remove_redundant_excludes(abs_, RelationSet(exclude={(r, t), (s, t)}))
    assert out.exclude == {(r, t)}


def test_no_witness_keeps_excludes():
    abs_ = abstractions_with_alternate(3, set())
    out = stage_remove_redundant_excludes(abs_, RelationSet(exclude={(0, 2), (1, 2)}))
    assert out.exclude == {(0, 2), (1, 2)}


def test_mutual_witnesses_remove_both():
    r, s, t = 0, 1, 2
    abs_ = abstractions_with_alternate(3, {(r, s), (s, r)})
    out = stage_remove_redundant_excludes(abs_, RelationSet(exclude={(r, t), (s, t)}))
    assert out.exclude == set()


# transitive reductions


def test_reduction_stage_touches_only_requested_relations():
    chain = {(1, 2), (2, 3), (3, 4), (1, 3), (1, 4), (2, 4)}
    rels = RelationSet(condition=set(chain), response=set(chain))
    both = stage_transitive_reductions(rels)
    assert both.condition == both.response == {(1, 2), (2, 3), (3, 4)}
    only = stage_transitive_reductions(rels, conditions_only=True)
    assert only.response == chain


# additional conditions


def test_limited_replay_admits_when_source_excluded():
    log = log_of("st", "ut")
    s, t, u = 0, 1, 2
    out = stage_additional_conditions(log, RelationSet(exclude={(u, s)}))
    assert (s, t) in out.condition


def test_limited_replay_rejects_unexcluded_source():
    log = log_of("st", "t")
    out = stage_additional_conditions(log, RelationSet())
    assert (0, 1) not in out.condition


def test_no_candidate_without_prior_occurrence():
    log = log_of("ts")
    out = stage_additional_conditions(log, RelationSet())
    assert (1, 0) not in out.condition


def admitted_one_at_a_time(log, rels):
    """Reference: test each candidate alone by a direct replay."""
    n = log.n_activities
    exc = {s: {t for a, t in rels.exclude if a == s} for s in range(n)}
    inc = {s: {t for a, t in rels.include if a == s} for s in range(n)}
    cands = set()
    for tr in log.traces:
        ev = list(tr.events)
        for j, t in enumerate(ev):
            if t not in ev[:j]:
                cands |= {(s, t) for s in ev[:j] if s != t}
    admitted = set()
    for s, t in sorted(cands):
        ok = True
        for tr in log.traces:
            included, executed = set(range(n)), set()
            for x in tr.events:
                if x == t and s in included and s not in executed:
                    ok = False
                executed.add(x)
                included = (included - exc[x]) | inc[x]
        if ok:
            admitted.add((s, t))
    return admitted


traces_st = st.lists(st.lists(st.sampled_from("abcde"), min_size=1, max_size=10), min_size=1, max_size=8)


@given(traces_st, st.randoms(use_true_random=False))
def test_additional_conditions_match_per_candidate_reference(seqs, rnd):
    log = EventLog.from_sequences(seqs)
    n = log.n_activities
    pairs = [(s, t) for s in range(n) for t in range(n)]
    exc = {p for p in pairs if rnd.random() < 0.2}
    inc = {p for p in pairs if rnd.random() < 0.2} - exc
    rels = RelationSet(include=inc, exclude=exc)
    out = stage_additional_conditions(log, rels)
    assert out.condition == admitted_one_at_a_time(log, rels)


def test_blockers_shape():
    log = log_of("ab")
    before_first, blockers = limited_replay_blockers(log, RelationSet())
    assert before_first == [0, 0b01]
    assert blockers == [0b11, 0b10]


# whole pipeline


def test_single_activity():
    log = log_of("a")
    g = mine(log)
    assert g.exclude_pairs() == {(0, 0)}
    assert g.accepts([0])


def test_l1_exact(samples):
    log = parse_txt((samples / "L1.txt").read_bytes())
    g = mine(log)
    assert (0, 1) in g.condition_pairs()
    assert fits(g, log)
    assert dcr.to_json(g) == (samples / "L1.model.json").read_bytes()


def test_empty_log_rejected():
    from dcrmine.log_io import ActivityAlphabet

    with pytest.raises(ValueError):
        mine(EventLog(ActivityAlphabet(()), ()))


def test_perfect_fitness_on_random_logs():
    rng = random.Random(2024)
    for _ in range(1000):
        log = EventLog.from_sequences(O.random_traces(rng))
        assert fits(mine(log), log)


@given(traces_st)
def test_perfect_fitness_property(seqs):
    log = EventLog.from_sequences(seqs)
    assert fits(mine(log), log)


@given(traces_st)
def test_include_exclude_disjoint_and_size_bounded(seqs):
    log = EventLog.from_sequences(seqs)
    g, _ = run_pipeline(log)
    assert not g.include_pairs() & g.exclude_pairs()
    assert g.relation_count() <= 4 * log.n_activities ** 2


@given(traces_st)
def test_deterministic(seqs):
    log = EventLog.from_sequences(seqs)
    assert dcr.to_json(mine(log)) == dcr.to_json(mine(EventLog.from_sequences(seqs)))


@given(traces_st)
def test_stage_monotonicity(seqs):
    log = EventLog.from_sequences(seqs)
    abs_ = build_abstractions(log)
    r2 = stage_templates(abs_)
    r3 = stage_additional_excludes(abs_, r2)
    r4 = stage_not_chain_succession(abs_, r3)
    r5 = stage_remove_redundant_excludes(abs_, r4)
    r6 = stage_transitive_reductions(r5)
    r7 = stage_additional_conditions(log, r6)
    r8 = stage_transitive_reductions(r7, conditions_only=True)
    names = ("condition", "response", "include", "exclude")
    for a, b in ((r2, r3), (r3, r4), (r6, r7)):
        for k in names:
            assert getattr(a, k) <= getattr(b, k)
    for a, b in ((r4, r5), (r5, r6), (r7, r8)):
        for k in names:
            assert getattr(b, k) <= getattr(a, k)
    assert r7.response == r6.response and r7.include == r6.include and r7.exclude == r6.exclude


def test_cartesian_variant_can_lose_fitness():
    # documents why self-pairs are the default
    log = log_of("ab")
    g = mine(log, MinerConfig(self_exclusion_only=False))
    assert not fits(g, log)
    assert fits(mine(log), log)


@pytest.mark.parametrize("kwargs", [{"unknown_activity_policy": "skip"}, {"txt_delimiter": ",,"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        MinerConfig(**kwargs)
