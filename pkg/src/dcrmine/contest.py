"""Locate numbered training / labelled test log pairs in a contest-style dataset.

Files are sorted by the words in their relative path: ``train`` marks a
training log, ``ground`` or ``truth`` a labelled test log, ``test`` an
unlabelled one. Logs are paired by the last integer in the file name.
Labels come from the boolean trace attribute ``pdc:isPos`` or, failing
that, from a sibling ``<stem>.truth.csv``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .evaluate import read_truth
from .log_io import EventLog, parse_xes, xes_trace_flags

LABEL_KEY = "pdc:isPos"


@dataclass(frozen=True)
class LogPair:
    key: int
    train: Path
    test: EventLog
    labels: dict[str, bool]


def _number(path: Path) -> int | None:
    numbers = re.findall(r"\d+", path.stem)
    return int(numbers[-1]) if numbers else None


def find_pairs(root: str | Path) -> list[LogPair]:
    root = Path(root)
    train: dict[int, Path] = {}
    test: dict[int, Path] = {}
    truth: dict[int, Path] = {}
    for p in sorted(root.rglob("*.xes")):
        key = _number(p)
        if key is None:
            continue
        where = str(p.relative_to(root)).lower()
        if "train" in where:
            train[key] = p
        elif "ground" in where or "truth" in where:
            truth[key] = p
        elif "test" in where:
            test[key] = p
    pairs = []
    for key in sorted(train):
        source = truth.get(key) or test.get(key)
        if source is None:
            continue
        data = source.read_bytes()
        labels = xes_trace_flags(data, LABEL_KEY)
        csv_path = source.with_name(source.stem + ".truth.csv")
        if not labels and csv_path.exists():
            labels = read_truth(csv_path.read_bytes())
        if labels:
            pairs.append(LogPair(key, train[key], parse_xes(data), labels))
    return pairs
