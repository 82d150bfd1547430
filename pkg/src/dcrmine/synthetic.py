"""Synthetic logs: uniform random traces and random walks over a DCR Graph."""

from __future__ import annotations

import random

from .bits import full
from .dcr import DcrGraph, Marking
from .log_io import EventLog


def activity_names(n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"A{i:0{width}d}" for i in range(n)]


def uniform_log(n_traces: int, n_activities: int, trace_length: int | tuple[int, int], seed: int = 0) -> EventLog:
    """Traces of independent uniform draws; ``trace_length`` may be a (lo, hi) range."""
    rng = random.Random(seed)
    names = activity_names(n_activities)
    lo, hi = (trace_length, trace_length) if isinstance(trace_length, int) else trace_length
    traces = [[rng.choice(names) for _ in range(rng.randint(lo, hi))] for _ in range(n_traces)]
    return EventLog.from_sequences(traces)


def random_graph(n_events: int, density: float = 0.08, seed: int = 0) -> DcrGraph:
    """A random DCR Graph, all events initially included.

    Conditions and responses only point forward in id order, so the
    process cannot dead-lock on a condition cycle.
    """
    rng = random.Random(seed)
    cond, resp, exc, inc = set(), set(), set(), set()
    for s in range(n_events):
        for t in range(n_events):
            if s < t and rng.random() < density:
                cond.add((s, t))
            if s < t and rng.random() < density / 2:
                resp.add((s, t))
            r = rng.random()
            if r < density / 2:
                exc.add((s, t))
            elif r < density:
                inc.add((s, t))
    return DcrGraph.from_pairs(activity_names(n_events), cond, resp, exc, inc, Marking(0, 0, full(n_events)))


def simulate(graph: DcrGraph, n_traces: int, max_length: int = 30, p_stop: float = 0.15, seed: int = 0) -> list[list[str]]:
    """Random walks over enabled events, stopping only in accepting markings.

    Walks that hit ``max_length`` or a dead end without being accepting are
    discarded and retried.
    """
    rng = random.Random(seed)
    traces: list[list[str]] = []
    attempts = 0
    while len(traces) < n_traces:
        attempts += 1
        if attempts > 1000 * n_traces:
            raise RuntimeError("could not generate enough accepted traces")
        m = graph.initial_marking
        trace: list[int] = []
        while len(trace) < max_length:
            if trace and m.is_accepting() and rng.random() < p_stop:
                break
            options = [e for e in range(graph.n) if graph.enabled(m, e)]
            if not options:
                break
            e = rng.choice(options)
            trace.append(e)
            m = graph.execute(m, e)
        if trace and m.is_accepting():
            traces.append([graph.labels[e] for e in trace])
    return traces


def mutate(trace: list[str], alphabet: list[str], rng: random.Random) -> list[str]:
    """Apply one random edit: swap two events, drop one, or insert one."""
    t = list(trace)
    op = rng.choice(("swap", "drop", "insert") if len(t) > 1 else ("insert",))
    if op == "swap":
        i, j = rng.sample(range(len(t)), 2)
        t[i], t[j] = t[j], t[i]
    elif op == "drop":
        del t[rng.randrange(len(t))]
    else:
        t.insert(rng.randrange(len(t) + 1), rng.choice(alphabet))
    return t


def labelled_test_log(
    graph: DcrGraph, n_pos: int, n_neg: int, max_length: int = 30, seed: int = 0
) -> tuple[list[list[str]], list[bool]]:
    """Positive walks plus mutated walks the reference model rejects, shuffled."""
    rng = random.Random(seed)
    positives = simulate(graph, n_pos, max_length, seed=rng.randrange(2**31))
    index = graph.index()
    negatives: list[list[str]] = []
    pool = simulate(graph, max(n_neg, 1), max_length, seed=rng.randrange(2**31))
    while len(negatives) < n_neg:
        cand = mutate(rng.choice(pool), list(graph.labels), rng)
        if cand and not graph.accepts(index[x] for x in cand):
            negatives.append(cand)
    rows = [(t, True) for t in positives] + [(t, False) for t in negatives]
    rng.shuffle(rows)
    return [t for t, _ in rows], [label for _, label in rows]
