"""Single-pass log abstractions backing the Declare-template predicates.

Every relation is stored as a list of bit vectors indexed by activity id.
The size of a :class:`LogAbstractions` depends on the alphabet only, never on
the number or length of traces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .bits import full, iter_bits, rows_to_pairs, transpose
from .log_io import ActivityAlphabet, EventLog


@dataclass(frozen=True)
class LogAbstractions:
    """Per-activity summaries of ordering behaviour in a log.

    Orientation of each field (``x`` is the list index, bits are the other
    activity):

    * ``precedence_for[t]``: ``s`` precedes every occurrence of ``t``.
    * ``alternate_precedence_for[t]``: every ``t`` has an ``s`` before it
      with no ``t`` in between.
    * ``chain_precedence_for[t]``: every ``t`` is immediately preceded by ``s``.
    * ``response_to[s]``: every ``s`` is eventually followed by ``t``.
    * ``predecessor[t]``: ``s`` occurs before ``t`` in some trace.
    * ``successor[s]``: ``t`` occurs after ``s`` in some trace.
    * ``immediately_follows[s]``: ``t`` directly follows ``s`` in some trace.
    * ``between_for[t]``: an ``n*n``-bit vector; bit ``u*n + s`` is set when
      ``u`` occurs strictly between some ``s`` and the next ``t`` after it.
    """

    n: int
    at_most_once: int
    precedence_for: tuple[int, ...]
    alternate_precedence_for: tuple[int, ...]
    chain_precedence_for: tuple[int, ...]
    response_to: tuple[int, ...]
    predecessor: tuple[int, ...]
    successor: tuple[int, ...]
    immediately_follows: tuple[int, ...]
    between_for: tuple[int, ...]

    def not_chain_succession_for(self, t: int) -> int:
        """Sources ``s`` never directly followed by ``t``."""
        b = 1 << t
        return sum(1 << s for s in range(self.n) if not self.immediately_follows[s] & b)

    def between(self, s: int, t: int) -> int:
        """Mask of activities lying between ``s`` and the next ``t``."""
        row = self.between_for[t]
        mask = 0
        for u in range(self.n):
            if (row >> (u * self.n + s)) & 1:
                mask |= 1 << u
        return mask

    def between_any(self, t: int, sources: int) -> int:
        """Mask of ``u`` lying between some ``s`` in ``sources`` and the next ``t``."""
        row, n, width = self.between_for[t], self.n, full(self.n)
        mask = 0
        for u in range(n):
            if (row >> (u * n)) & width & sources:
                mask |= 1 << u
        return mask

    # pair views, mostly for tests and debugging

    def response_pairs(self) -> set[tuple[int, int]]:
        return rows_to_pairs(self.response_to)

    def precedence_pairs(self) -> set[tuple[int, int]]:
        return {(s, t) for t, s in rows_to_pairs(self.precedence_for)}

    def alternate_precedence_pairs(self) -> set[tuple[int, int]]:
        return {(s, t) for t, s in rows_to_pairs(self.alternate_precedence_for)}

    def chain_precedence_pairs(self) -> set[tuple[int, int]]:
        return {(s, t) for t, s in rows_to_pairs(self.chain_precedence_for)}

    def predecessor_pairs(self) -> set[tuple[int, int]]:
        return {(s, t) for t, s in rows_to_pairs(self.predecessor)}

    def successor_pairs(self) -> set[tuple[int, int]]:
        return rows_to_pairs(self.successor)

    def immediately_follows_pairs(self) -> set[tuple[int, int]]:
        return rows_to_pairs(self.immediately_follows)


def build_abstractions(log: EventLog) -> LogAbstractions:
    """Scan every trace once and accumulate all abstractions.

    Universal predicates start full and are intersected per trace;
    existential ones start empty and are unioned.
    """
    n = log.n_activities
    everything = full(n)
    at_most_once = everything
    prec = [everything] * n
    alt = [everything] * n
    chain = [everything] * n
    resp = [everything] * n
    pred = [0] * n
    follows = [0] * n
    between = [0] * n

    for trace in log.traces:
        seen = 0
        # since[t]: activities seen after the latest t; bit t marks that a t occurred
        since: dict[int, int] = {}
        # pending[t]: between-pairs of the window that the next t will close
        pending: dict[int, int] = {}
        pending_unseen = 0
        prev = -1
        for x in trace.events:
            bx = 1 << x
            if x in since:
                at_most_once &= ~bx
                alt[x] &= since[x]
                between[x] |= pending[x]
            else:
                prec[x] &= seen
                alt[x] &= seen
                between[x] |= pending_unseen
            chain[x] &= (1 << prev) if prev >= 0 else 0
            if prev >= 0:
                follows[prev] |= bx
            pred[x] |= seen

            # x is now an intermediate of every window still open
            shift = x * n
            for t, src in since.items():
                if t != x:
                    pending[t] |= (src & ~bx) << shift
                    since[t] = src | bx
            pending_unseen |= (seen & ~bx) << shift
            since[x] = bx
            pending[x] = 0
            seen |= bx
            prev = x

        # every s is followed by t iff the last s is
        for s, after in since.items():
            resp[s] &= after & ~(1 << s)

    return LogAbstractions(
        n=n,
        at_most_once=at_most_once,
        precedence_for=tuple(prec),
        alternate_precedence_for=tuple(alt),
        chain_precedence_for=tuple(chain),
        response_to=tuple(resp),
        predecessor=tuple(pred),
        successor=tuple(transpose(pred)),
        immediately_follows=tuple(follows),
        between_for=tuple(between),
    )


def not_chain_succession(abs_: LogAbstractions) -> set[tuple[int, int]]:
    """All ``(s, t)`` where ``t`` never directly follows ``s`` (self pairs included)."""
    return {(s, t) for s in range(abs_.n) for t in range(abs_.n) if not (abs_.immediately_follows[s] >> t) & 1}


def between(log: EventLog, s: int, t: int) -> set[int]:
    return set(iter_bits(build_abstractions(log).between(s, t)))


def to_json(abs_: LogAbstractions, alphabet: ActivityAlphabet) -> str:
    """Debug dump keyed by activity name."""
    names = alphabet.names

    def rows(vectors) -> dict[str, list[str]]:
        return {names[i]: [names[j] for j in iter_bits(v)] for i, v in enumerate(vectors)}

    doc = {
        "atMostOnce": [names[i] for i in iter_bits(abs_.at_most_once)],
        "precedenceFor": rows(abs_.precedence_for),
        "alternatePrecedenceFor": rows(abs_.alternate_precedence_for),
        "chainPrecedenceFor": rows(abs_.chain_precedence_for),
        "responseTo": rows(abs_.response_to),
        "predecessor": rows(abs_.predecessor),
        "successor": rows(abs_.successor),
        "immediatelyFollows": rows(abs_.immediately_follows),
    }
    return json.dumps(doc, indent=2)
