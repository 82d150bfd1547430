"""DCR Graphs over bit vectors: model, execution semantics, replay, I/O.

Events are dense ids ``0..n-1`` with an injective labelling. Conditions are
stored by target (queried when checking enabledness); responses, excludes
and includes by source (applied when executing).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bits import full, iter_bits, pairs_to_rows, rows_to_pairs


class ModelError(ValueError):
    """A model document is malformed or violates a DCR invariant."""


@dataclass(frozen=True)
class Marking:
    executed: int
    pending: int
    included: int

    def is_accepting(self) -> bool:
        return not (self.pending & self.included)

    def blocking_conditions(self) -> int:
        """Events that block their condition targets: included, not executed."""
        return self.included & ~self.executed


def is_accepting(marking: Marking) -> bool:
    return marking.is_accepting()


class Outcome(enum.Enum):
    ACCEPTED = "accepted"
    DISABLED = "rejected-disabled"
    NON_ACCEPTING = "rejected-nonaccepting"


@dataclass(frozen=True)
class ReplayVerdict:
    outcome: Outcome
    marking: Marking
    position: int | None = None

    @property
    def accepted(self) -> bool:
        return self.outcome is Outcome.ACCEPTED


@dataclass(frozen=True)
class DcrGraph:
    labels: tuple[str, ...]
    conditions_for: tuple[int, ...]
    responses_to: tuple[int, ...]
    excludes_to: tuple[int, ...]
    includes_to: tuple[int, ...]
    initial_marking: Marking

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ModelError("event labels must be distinct")
        width = full(n)
        for name in ("conditions_for", "responses_to", "excludes_to", "includes_to"):
            rows = getattr(self, name)
            if len(rows) != n:
                raise ModelError(f"{name} has {len(rows)} rows for {n} events")
            if any(r & ~width for r in rows):
                raise ModelError(f"{name} refers to events outside 0..{n - 1}")
        for e in range(n):
            both = self.excludes_to[e] & self.includes_to[e]
            if both:
                clash = ", ".join(self.labels[x] for x in iter_bits(both))
                raise ModelError(f"{self.labels[e]} both includes and excludes {clash}")
        m = self.initial_marking
        if (m.executed | m.pending | m.included) & ~width:
            raise ModelError("initial marking refers to unknown events")

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_pairs(
        cls,
        labels: Sequence[str],
        conditions: Iterable[tuple[int, int]] = (),
        responses: Iterable[tuple[int, int]] = (),
        excludes: Iterable[tuple[int, int]] = (),
        includes: Iterable[tuple[int, int]] = (),
        marking: Marking | None = None,
    ) -> "DcrGraph":
        """Build from ``(source, target)`` id pairs; default marking is all included."""
        n = len(labels)
        cond_rows = pairs_to_rows(((t, s) for s, t in conditions), n)
        if marking is None:
            marking = Marking(0, 0, full(n))
        return cls(
            labels=tuple(labels),
            conditions_for=tuple(cond_rows),
            responses_to=tuple(pairs_to_rows(responses, n)),
            excludes_to=tuple(pairs_to_rows(excludes, n)),
            includes_to=tuple(pairs_to_rows(includes, n)),
            initial_marking=marking,
        )

    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def _check(self, event: int) -> None:
        if not 0 <= event < self.n:
            raise IndexError(f"event id {event} out of range for {self.n} events")

    def enabled(self, marking: Marking, event: int) -> bool:
        self._check(event)
        if not (marking.included >> event) & 1:
            return False
        return not (self.conditions_for[event] & marking.included & ~marking.executed)

    def execute(self, marking: Marking, event: int) -> Marking:
        """Apply the effects of ``event``; does not check enabledness."""
        self._check(event)
        b = 1 << event
        pending = (marking.pending & ~b) | self.responses_to[event]
        included = (marking.included & ~self.excludes_to[event]) | self.includes_to[event]
        return Marking(marking.executed | b, pending, included)

    def _ids(self, events: Iterable[int]) -> list[int]:
        events = list(events)
        if events and (min(events) < 0 or max(events) >= self.n):
            bad = next(e for e in events if not 0 <= e < self.n)
            raise IndexError(f"event id {bad} out of range for {self.n} events")
        return events

    def replay(self, events: Iterable[int]) -> ReplayVerdict:
        """Execute ``events`` from the initial marking, stopping at the first disabled one.

        Same semantics as chaining :meth:`enabled` and :meth:`execute`,
        unrolled over plain ints for speed.
        """
        events = self._ids(events)
        m = self.initial_marking
        executed, pending, included = m.executed, m.pending, m.included
        cond, resp, exc, inc = self.conditions_for, self.responses_to, self.excludes_to, self.includes_to
        bits = [1 << e for e in range(self.n)]
        for pos, e in enumerate(events):
            b = bits[e]
            if not included & b or cond[e] & included & ~executed:
                return ReplayVerdict(Outcome.DISABLED, Marking(executed, pending, included), pos)
            executed |= b
            pending = (pending & ~b) | resp[e]
            included = (included & ~exc[e]) | inc[e]
        final = Marking(executed, pending, included)
        if final.is_accepting():
            return ReplayVerdict(Outcome.ACCEPTED, final)
        return ReplayVerdict(Outcome.NON_ACCEPTING, final)

    def accepts(self, events: Iterable[int]) -> bool:
        return self.replay(events).accepted

    # relation views as (source, target) pairs

    def condition_pairs(self) -> set[tuple[int, int]]:
        return {(s, t) for t, s in rows_to_pairs(self.conditions_for)}

    def response_pairs(self) -> set[tuple[int, int]]:
        return rows_to_pairs(self.responses_to)

    def exclude_pairs(self) -> set[tuple[int, int]]:
        return rows_to_pairs(self.excludes_to)

    def include_pairs(self) -> set[tuple[int, int]]:
        return rows_to_pairs(self.includes_to)

    def relation_count(self) -> int:
        return sum(
            bin(r).count("1")
            for rows in (self.conditions_for, self.responses_to, self.excludes_to, self.includes_to)
            for r in rows
        )


# serialization

_RELATIONS = (
    ("conditionsFor", "condition_pairs"),
    ("responsesTo", "response_pairs"),
    ("excludesTo", "exclude_pairs"),
    ("includesTo", "include_pairs"),
)


def to_json(graph: DcrGraph) -> bytes:
    labels = graph.labels

    def named(pairs: set[tuple[int, int]]) -> list[list[str]]:
        return sorted([labels[s], labels[t]] for s, t in pairs)

    m = graph.initial_marking
    doc = {"events": list(labels)}
    for key, view in _RELATIONS:
        doc[key] = named(getattr(graph, view)())
    doc["initialMarking"] = {
        "executed": [labels[i] for i in iter_bits(m.executed)],
        "pending": [labels[i] for i in iter_bits(m.pending)],
        "included": [labels[i] for i in iter_bits(m.included)],
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def from_json(data: bytes | str) -> DcrGraph:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelError(f"model is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelError("model must be a JSON object")
    events = doc.get("events")
    if not isinstance(events, list) or not all(isinstance(e, str) for e in events):
        raise ModelError("'events' must be a list of labels")
    if len(set(events)) != len(events):
        raise ModelError("'events' contains duplicate labels")
    index = {label: i for i, label in enumerate(events)}

    def ids(values, where: str) -> list[int]:
        if not isinstance(values, list):
            raise ModelError(f"'{where}' must be a list")
        try:
            return [index[v] for v in values]
        except (KeyError, TypeError) as exc:
            raise ModelError(f"'{where}' refers to unknown event {exc}") from exc

    def pairs(key: str) -> list[tuple[int, int]]:
        raw = doc.get(key, [])
        if not isinstance(raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in raw):
            raise ModelError(f"'{key}' must be a list of [source, target] pairs")
        flat = ids([x for p in raw for x in p], key)
        return list(zip(flat[0::2], flat[1::2]))

    marking_doc = doc.get("initialMarking", {})
    if not isinstance(marking_doc, dict):
        raise ModelError("'initialMarking' must be an object")
    def mask(key: str, default: int) -> int:
        if key not in marking_doc:
            return default
        return sum(1 << i for i in set(ids(marking_doc[key], key)))

    marking = Marking(mask("executed", 0), mask("pending", 0), mask("included", full(len(events))))
    return DcrGraph.from_pairs(
        events,
        conditions=pairs("conditionsFor"),
        responses=pairs("responsesTo"),
        excludes=pairs("excludesTo"),
        includes=pairs("includesTo"),
        marking=marking,
    )


_DOT_STYLE = {
    "condition_pairs": 'color="#d08000", arrowhead=dotnormal, label="cond"',
    "response_pairs": 'color="#1f5fbf", arrowtail=dot, dir=both, arrowhead=normal, label="resp"',
    "exclude_pairs": 'color="#c00000", label="%"',
    "include_pairs": 'color="#008000", label="+"',
}


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: DcrGraph) -> bytes:
    m = graph.initial_marking
    lines = ["digraph dcr {", "  rankdir=LR;", "  node [shape=box, style=rounded];"]
    for i, label in enumerate(graph.labels):
        attrs = []
        if not (m.included >> i) & 1:
            attrs.append("style=dashed")
        if (m.pending >> i) & 1:
            attrs.append('xlabel="!"')
        if (m.executed >> i) & 1:
            attrs.append("peripheries=2")
        lines.append(f"  {_dot_id(label)}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for view, style in _DOT_STYLE.items():
        for s, t in sorted(getattr(graph, view)()):
            lines.append(f"  {_dot_id(graph.labels[s])} -> {_dot_id(graph.labels[t])} [{style}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
