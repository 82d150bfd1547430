"""Event log ingestion (XES subset, plain text) and classification output.

Activities are interned into an :class:`ActivityAlphabet` in order of first
appearance, and traces are stored as tuples of integer ids. Everything
downstream works on those ids only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence, Union
from xml.etree import ElementTree as ET

ACTIVITY_KEY = "concept:name"

Source = Union[bytes, str, BinaryIO]


class LogError(ValueError):
    """Base class for problems with an input log."""


class LogParseError(LogError):
    """The input is not well-formed (e.g. broken XML)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" if line is not None else "unknown position"
        if column is not None:
            where += f", column {column}"
        super().__init__(f"{message} ({where})")


class LogFormatError(LogError):
    """The input is well-formed but violates the log format."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}" + (f", column {column}" if column is not None else "") + f": {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ActivityAlphabet:
    names: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {name: i for i, name in enumerate(self.names)}
        if len(index) != len(self.names):
            raise ValueError("activity names must be distinct")
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def id_of(self, name: str) -> int:
        return self._index[name]

    def get(self, name: str) -> int | None:
        return self._index.get(name)

    def label(self, i: int) -> str:
        return self.names[i]


@dataclass(frozen=True)
class Trace:
    events: tuple[int, ...]
    trace_id: str | None = None

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class EventLog:
    alphabet: ActivityAlphabet
    traces: tuple[Trace, ...]

    def __post_init__(self) -> None:
        n = len(self.alphabet)
        seen = [False] * n
        for trace in self.traces:
            if not trace.events:
                raise LogFormatError(f"trace {trace.trace_id!r} is empty")
            for e in trace.events:
                if not 0 <= e < n:
                    raise ValueError(f"activity id {e} outside alphabet of size {n}")
                seen[e] = True
        if not all(seen):
            missing = [self.alphabet.names[i] for i, s in enumerate(seen) if not s]
            raise ValueError(f"alphabet contains activities absent from the log: {missing}")

    def __len__(self) -> int:
        return len(self.traces)

    @property
    def n_activities(self) -> int:
        return len(self.alphabet)

    @property
    def n_events(self) -> int:
        return sum(len(t.events) for t in self.traces)

    def labels(self, trace: Trace) -> list[str]:
        return [self.alphabet.names[e] for e in trace.events]

    @classmethod
    def from_sequences(
        cls, sequences: Iterable[Sequence[str]], trace_ids: Iterable[str] | None = None
    ) -> "EventLog":
        """Build a log from label sequences, interning labels by first appearance."""
        sequences = [list(s) for s in sequences]
        ids = list(trace_ids) if trace_ids is not None else [str(i) for i in range(len(sequences))]
        if len(ids) != len(sequences):
            raise ValueError("trace_ids and sequences differ in length")
        builder = _LogBuilder()
        for tid, seq in zip(ids, sequences):
            builder.add(seq, tid)
        return builder.build()


class _LogBuilder:
    def __init__(self) -> None:
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.traces: list[Trace] = []

    def intern(self, label: str) -> int:
        i = self.index.get(label)
        if i is None:
            i = len(self.names)
            self.index[label] = i
            self.names.append(label)
        return i

    def add(self, labels: Sequence[str], trace_id: str) -> None:
        if not labels:
            raise LogFormatError(f"trace {trace_id!r} is empty")
        self.traces.append(Trace(tuple(self.intern(x) for x in labels), trace_id))

    def build(self) -> EventLog:
        return EventLog(ActivityAlphabet(tuple(self.names)), tuple(self.traces))


def read_bytes(source: Source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, str):
        return source.encode("utf-8")
    return source.read()


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _string_attr(elem: ET.Element, key: str) -> str | None:
    for child in elem:
        if _local(child.tag) == "string" and child.get("key") == key:
            return child.get("value")
    return None


def _parse_xml(source: Source) -> ET.Element:
    try:
        return ET.fromstring(read_bytes(source))
    except ET.ParseError as exc:
        line, column = exc.position
        raise LogParseError(f"malformed XML: {exc.msg.split(':')[0]}", line, column) from exc


def parse_xes(source: Source) -> EventLog:
    """Parse the log/trace/event subset of XES.

    Only ``concept:name`` string attributes are read. Events are taken in
    document order; timestamps and lifecycle information are ignored.
    """
    root = _parse_xml(source)
    builder = _LogBuilder()
    for ordinal, trace_elem in enumerate(e for e in root if _local(e.tag) == "trace"):
        tid = _string_attr(trace_elem, ACTIVITY_KEY)
        if tid is None:
            tid = str(ordinal)
        labels = []
        for event_elem in trace_elem:
            if _local(event_elem.tag) != "event":
                continue
            label = _string_attr(event_elem, ACTIVITY_KEY)
            if label is None:
                raise LogFormatError(f"event without concept:name in trace {tid!r}")
            labels.append(label)
        builder.add(labels, tid)
    return builder.build()


def xes_trace_flags(source: Source, key: str) -> dict[str, bool]:
    """Map trace id to the trace-level boolean attribute ``key``.

    Used for labelled test logs where ground truth travels inside the XES
    file. Traces lacking the attribute are omitted.
    """
    root = _parse_xml(source)
    flags = {}
    for ordinal, trace_elem in enumerate(e for e in root if _local(e.tag) == "trace"):
        tid = _string_attr(trace_elem, ACTIVITY_KEY) or str(ordinal)
        for child in trace_elem:
            if _local(child.tag) == "boolean" and child.get("key") == key:
                flags[tid] = child.get("value", "").strip().lower() == "true"
    return flags


def parse_txt(source: Source, delimiter: str = ",") -> EventLog:
    """One trace per line, activities separated by ``delimiter``.

    Blank lines are skipped; trace ids are the 0-based ordinals of the
    non-blank lines.
    """
    if len(delimiter) != 1:
        raise ValueError("delimiter must be a single character")
    try:
        text = read_bytes(source).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise LogParseError(f"input is not UTF-8: {exc.reason}") from exc
    builder = _LogBuilder()
    ordinal = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = line.split(delimiter)
        column = 1
        for token in tokens:
            if token == "":
                raise LogFormatError("empty activity name", lineno, column)
            column += len(token) + 1
        builder.add(tokens, str(ordinal))
        ordinal += 1
    return builder.build()


def write_txt(log: EventLog, delimiter: str = ",") -> bytes:
    names = log.alphabet.names
    for name in names:
        if delimiter in name or "\n" in name or "\r" in name or not name.strip():
            raise ValueError(f"activity {name!r} cannot be written in the text format")
    lines = [delimiter.join(names[e] for e in trace.events) for trace in log.traces]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def write_xes(log: EventLog) -> bytes:
    root = ET.Element("log", {"xes.version": "1.0"})
    for trace in log.traces:
        t = ET.SubElement(root, "trace")
        if trace.trace_id is not None:
            ET.SubElement(t, "string", {"key": ACTIVITY_KEY, "value": trace.trace_id})
        for e in trace.events:
            ev = ET.SubElement(t, "event")
            ET.SubElement(ev, "string", {"key": ACTIVITY_KEY, "value": log.alphabet.names[e]})
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


@dataclass(frozen=True)
class Reason:
    """Why a trace was rejected."""

    kind: str  # "disabled", "non-accepting" or "unknown-activity"
    position: int | None = None
    label: str | None = None

    def __str__(self) -> str:
        if self.kind == "disabled":
            return f"disabled@{self.position}"
        if self.kind == "unknown-activity":
            return f"unknown-activity:{self.label}"
        return self.kind

    @classmethod
    def disabled(cls, position: int) -> "Reason":
        return cls("disabled", position=position)

    @classmethod
    def non_accepting(cls) -> "Reason":
        return cls("non-accepting")

    @classmethod
    def unknown_activity(cls, label: str) -> "Reason":
        return cls("unknown-activity", label=label)


@dataclass(frozen=True)
class ClassificationResult:
    trace_id: str
    accepted: bool
    reason: Reason | None = None

    def __post_init__(self) -> None:
        if self.accepted != (self.reason is None):
            raise ValueError("a reason is given exactly when the trace is rejected")


def write_classifications(results: Iterable[ClassificationResult]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trace_id", "verdict", "reason"])
    for r in results:
        writer.writerow([r.trace_id, "ACCEPT" if r.accepted else "REJECT", "" if r.reason is None else str(r.reason)])
    return buf.getvalue().encode("utf-8")


def load_log(path: str, fmt: str | None = None, delimiter: str = ",") -> EventLog:
    """Read a log file; ``fmt`` defaults to the file extension."""
    if fmt is None:
        fmt = "xes" if path.lower().endswith(".xes") else "txt"
    with open(path, "rb") as fh:
        data = fh.read()
    if fmt == "xes":
        return parse_xes(data)
    if fmt == "txt":
        return parse_txt(data, delimiter)
    raise ValueError(f"unknown log format {fmt!r}")
