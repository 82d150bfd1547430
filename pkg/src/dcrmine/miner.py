"""Discovery of a DCR Graph from an event log.

The pipeline seeds relations from Declare templates, adds exclusions from
predecessor/successor and not-chain-succession evidence, prunes redundant
exclusions, transitively reduces conditions and responses, and finally
adds conditions validated by a replay that tracks inclusion only.

All evidence is read from :class:`LogAbstractions`; the log itself is
scanned again only for the additional-conditions step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .abstractions import LogAbstractions, build_abstractions
from .bits import full, iter_bits, pairs_to_rows
from .dcr import DcrGraph, Marking
from .log_io import EventLog
from .reduction import transitive_reduction

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class MinerConfig:
    # False reproduces the literal AtMostOne x AtMostOne product for self-exclusions
    self_exclusion_only: bool = True
    txt_delimiter: str = ","
    unknown_activity_policy: str = "reject"

    def __post_init__(self) -> None:
        if self.unknown_activity_policy not in ("reject", "error"):
            raise ValueError(f"unknown activity policy {self.unknown_activity_policy!r}")
        if len(self.txt_delimiter) != 1:
            raise ValueError("txt_delimiter must be a single character")


@dataclass(frozen=True)
class DroppedPair:
    """An include or exclude rejected because the opposite relation already held it."""

    stage: str
    relation: str
    pair: Pair


@dataclass
class RelationSet:
    condition: set[Pair] = field(default_factory=set)
    response: set[Pair] = field(default_factory=set)
    include: set[Pair] = field(default_factory=set)
    exclude: set[Pair] = field(default_factory=set)
    dropped: list[DroppedPair] = field(default_factory=list)

    def copy(self) -> "RelationSet":
        return RelationSet(
            set(self.condition), set(self.response), set(self.include), set(self.exclude), list(self.dropped)
        )

    def add_exclude(self, pair: Pair, stage: str) -> None:
        # the relation that got there first wins, keeping include and exclude disjoint
        if pair in self.include:
            self.dropped.append(DroppedPair(stage, "exclude", pair))
        else:
            self.exclude.add(pair)

    def add_include(self, pair: Pair, stage: str) -> None:
        if pair in self.exclude:
            self.dropped.append(DroppedPair(stage, "include", pair))
        else:
            self.include.add(pair)

    def counts(self) -> dict[str, int]:
        return {
            "condition": len(self.condition),
            "response": len(self.response),
            "include": len(self.include),
            "exclude": len(self.exclude),
        }


def _choose_one_per_target(candidates: Iterable[Pair]) -> list[Pair]:
    """First-come choice: lowest (source, target) wins for each target."""
    chosen: dict[int, Pair] = {}
    for s, t in sorted(candidates):
        chosen.setdefault(t, (s, t))
    return sorted(chosen.values())


def stage_templates(abs_: LogAbstractions, config: MinerConfig = MinerConfig()) -> RelationSet:
    n = abs_.n
    rels = RelationSet()
    once = list(iter_bits(abs_.at_most_once))
    if config.self_exclusion_only:
        for a in once:
            rels.add_exclude((a, a), "templates")
    else:
        for a in once:
            for b in once:
                rels.add_exclude((a, b), "templates")
    for s in range(n):
        for t in iter_bits(abs_.response_to[s]):
            if s != t:
                rels.response.add((s, t))
    for t in range(n):
        for s in iter_bits(abs_.precedence_for[t]):
            if s != t:
                rels.condition.add((s, t))
    for t in range(n):
        sources = abs_.chain_precedence_for[t] & ~(1 << t)
        if sources:
            for s in iter_bits(sources):
                rels.add_include((s, t), "templates")
            rels.add_exclude((t, t), "templates")
    return rels


def stage_additional_excludes(abs_: LogAbstractions, rels: RelationSet) -> RelationSet:
    out = rels.copy()
    n = abs_.n
    pred, succ = abs_.predecessor, abs_.successor

    # s and t never co-occur: s is never before t and t is never before s
    never_together = [
        (s, t)
        for s in range(n)
        for t in range(n)
        if s != t and not (pred[t] >> s) & 1 and not (succ[t] >> s) & 1
    ]
    for pair in _choose_one_per_target(never_together):
        out.add_exclude(pair, "not-coexistence")

    # s is seen before t but never after it, and s is not self-excluding: t excludes s
    not_succession = [
        (t, s)
        for s in range(n)
        for t in range(n)
        if s != t and (pred[t] >> s) & 1 and not (succ[t] >> s) & 1 and (s, s) not in out.exclude
    ]
    for pair in _choose_one_per_target(not_succession):
        out.add_exclude(pair, "not-succession")
    return out


def stage_not_chain_succession(abs_: LogAbstractions, rels: RelationSet) -> RelationSet:
    out = rels.copy()
    n = abs_.n
    sources_for = [abs_.not_chain_succession_for(t) for t in range(n)]
    for t in range(n):
        for s in iter_bits(sources_for[t]):
            out.add_exclude((s, t), "not-chain-succession")
    for t in range(n):
        if sources_for[t]:
            for u in iter_bits(abs_.between_any(t, sources_for[t])):
                out.add_include((u, t), "not-chain-succession")
    return out


def stage_remove_redundant_excludes(abs_: LogAbstractions, rels: RelationSet) -> RelationSet:
    """Drop ``s %-> t`` when some other ``u %-> t`` exists and ``u`` alternately precedes ``s``.

    Witnesses come from the exclude set as it was on entry, so removals
    never cascade.
    """
    out = rels.copy()
    excluders = pairs_to_rows(((t, s) for s, t in rels.exclude), abs_.n)
    alt = abs_.alternate_precedence_for
    out.exclude = {(s, t) for s, t in rels.exclude if not (excluders[t] & alt[s] & ~(1 << s))}
    return out


def stage_transitive_reductions(rels: RelationSet, conditions_only: bool = False) -> RelationSet:
    out = rels.copy()
    out.condition = transitive_reduction(rels.condition)
    if not conditions_only:
        out.response = transitive_reduction(rels.response)
    return out


def limited_replay_blockers(log: EventLog, rels: RelationSet) -> tuple[list[int], list[int]]:
    """Replay every trace tracking only inclusion.

    Returns ``(before_first, blockers)``: ``before_first[t]`` holds the
    activities seen before the first ``t`` of some trace; ``blockers[t]``
    holds those that were included but not yet executed at some execution
    of ``t``.
    """
    n = log.n_activities
    exc = pairs_to_rows(rels.exclude, n)
    inc = pairs_to_rows(rels.include, n)
    everything = full(n)
    before_first = [0] * n
    blockers = [0] * n
    for trace in log.traces:
        included = everything
        executed = 0
        for x in trace.events:
            if not (executed >> x) & 1:
                before_first[x] |= executed
            blockers[x] |= included & ~executed
            executed |= 1 << x
            included = (included & ~exc[x]) | inc[x]
    return before_first, blockers


def stage_additional_conditions(log: EventLog, rels: RelationSet) -> RelationSet:
    out = rels.copy()
    before_first, blockers = limited_replay_blockers(log, rels)
    for t in range(log.n_activities):
        for s in iter_bits(before_first[t] & ~blockers[t] & ~(1 << t)):
            out.condition.add((s, t))
    return out


@dataclass
class Diagnostics:
    stage_counts: list[tuple[str, dict[str, int]]] = field(default_factory=list)
    dropped: list[DroppedPair] = field(default_factory=list)

    def to_dict(self, labels: tuple[str, ...]) -> dict:
        return {
            "stages": [{"stage": name, **counts} for name, counts in self.stage_counts],
            "dropped": [
                {"stage": d.stage, "relation": d.relation, "source": labels[d.pair[0]], "target": labels[d.pair[1]]}
                for d in self.dropped
            ],
        }


def run_pipeline(log: EventLog, config: MinerConfig = MinerConfig()) -> tuple[DcrGraph, Diagnostics]:
    if not log.traces:
        raise ValueError("cannot mine an empty log")
    abs_ = build_abstractions(log)
    diag = Diagnostics()

    def record(name: str, rels: RelationSet) -> RelationSet:
        counts = rels.counts()
        diag.stage_counts.append((name, counts))
        logger.debug("stage %s: %s", name, counts)
        return rels

    rels = record("templates", stage_templates(abs_, config))
    rels = record("additional-excludes", stage_additional_excludes(abs_, rels))
    rels = record("not-chain-succession", stage_not_chain_succession(abs_, rels))
    rels = record("remove-redundant-excludes", stage_remove_redundant_excludes(abs_, rels))
    rels = record("transitive-reduction", stage_transitive_reductions(rels))
    rels = record("additional-conditions", stage_additional_conditions(log, rels))
    rels = record("final-condition-reduction", stage_transitive_reductions(rels, conditions_only=True))
    diag.dropped = list(rels.dropped)

    n = log.n_activities
    graph = DcrGraph.from_pairs(
        log.alphabet.names,
        conditions=rels.condition,
        responses=rels.response,
        excludes=rels.exclude,
        includes=rels.include,
        marking=Marking(executed=0, pending=0, included=full(n)),
    )
    return graph, diag


def mine(log: EventLog, config: MinerConfig = MinerConfig()) -> DcrGraph:
    return run_pipeline(log, config)[0]
