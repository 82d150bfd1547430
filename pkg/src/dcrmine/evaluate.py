"""Trace classification against a model, confusion matrices and metrics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .dcr import DcrGraph, Outcome
from .log_io import ClassificationResult, EventLog, Reason, Source, read_bytes


class UnknownActivityError(ValueError):
    def __init__(self, trace_id: str, label: str):
        self.trace_id = trace_id
        self.label = label
        super().__init__(f"trace {trace_id}: activity {label!r} is not in the model")


class TruthError(ValueError):
    pass


def classify(graph: DcrGraph, log: EventLog, policy: str = "reject") -> list[ClassificationResult]:
    """Replay each trace of ``log`` on ``graph``.

    Labels are matched by name, so the log and the model may use different
    id assignments. A label the model does not know rejects the trace, or
    raises :class:`UnknownActivityError` when ``policy == "error"``.
    """
    if policy not in ("reject", "error"):
        raise ValueError(f"unknown policy {policy!r}")
    index = graph.index()
    # log activity id -> model event id (None if unknown)
    mapping = [index.get(name) for name in log.alphabet.names]
    results = []
    for ordinal, trace in enumerate(log.traces):
        tid = trace.trace_id if trace.trace_id is not None else str(ordinal)
        unknown = next((e for e in trace.events if mapping[e] is None), None)
        if unknown is not None:
            label = log.alphabet.names[unknown]
            if policy == "error":
                raise UnknownActivityError(tid, label)
            results.append(ClassificationResult(tid, False, Reason.unknown_activity(label)))
            continue
        verdict = graph.replay(mapping[e] for e in trace.events)
        if verdict.outcome is Outcome.ACCEPTED:
            results.append(ClassificationResult(tid, True))
        elif verdict.outcome is Outcome.DISABLED:
            results.append(ClassificationResult(tid, False, Reason.disabled(verdict.position)))
        else:
            results.append(ClassificationResult(tid, False, Reason.non_accepting()))
    return results


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def transposed(self) -> "ConfusionMatrix":
        """Swap the roles of the two classes."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)


def confusion(predicted: Sequence[bool], truth: Sequence[bool]) -> ConfusionMatrix:
    """``True`` means accepted (predicted) or legal (truth)."""
    if len(predicted) != len(truth):
        raise ValueError(f"{len(predicted)} predictions for {len(truth)} labels")
    tp = fp = fn = tn = 0
    for p, t in zip(predicted, truth):
        if p and t:
            tp += 1
        elif p:
            fp += 1
        elif t:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def precision(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fp)


def recall(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fn)


def f_beta(p: float, r: float, beta: float = 1.0, printed: bool = False) -> float:
    """Weighted harmonic mean of precision and recall.

    ``printed=True`` uses ``beta`` instead of ``beta**2`` in the denominator;
    the two agree for ``beta == 1``.
    """
    den = (beta if printed else beta * beta) * p + r
    return _ratio((1 + beta * beta) * p * r, den)


def mcc(cm: ConfusionMatrix) -> float:
    """Matthews correlation; 0 when any marginal is empty."""
    den = (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn)
    if den == 0:
        return 0.0
    return (cm.tp * cm.tn - cm.fp * cm.fn) / math.sqrt(den)


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    precision_pos: float
    recall_pos: float
    f_pos: float
    precision_neg: float
    recall_neg: float
    f_neg: float
    mcc: float
    weighted_error: float
    beta: float
    alpha_penalty: float
    beta_penalty: float

    def to_dict(self) -> dict:
        return asdict(self)


def metrics(
    cm: ConfusionMatrix,
    beta: float = 1.0,
    alpha: float = 1.0,
    beta_penalty: float = 1.0,
    printed_f_beta: bool = False,
) -> MetricReport:
    """All ratios for both target-class framings.

    ``alpha`` penalises false positives (an illegal trace accepted) and
    ``beta_penalty`` false negatives; ``beta`` only weights the F-score.
    """
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    neg = cm.transposed()
    p_pos, r_pos = precision(cm), recall(cm)
    p_neg, r_neg = precision(neg), recall(neg)
    return MetricReport(
        accuracy=(cm.tp + cm.tn) / cm.total,
        precision_pos=p_pos,
        recall_pos=r_pos,
        f_pos=f_beta(p_pos, r_pos, beta, printed_f_beta),
        precision_neg=p_neg,
        recall_neg=r_neg,
        f_neg=f_beta(p_neg, r_neg, beta, printed_f_beta),
        mcc=mcc(cm),
        weighted_error=(alpha * cm.fp + beta_penalty * cm.fn) / cm.total,
        beta=beta,
        alpha_penalty=alpha,
        beta_penalty=beta_penalty,
    )


def read_truth(source: Source) -> dict[str, bool]:
    """Parse ``trace_id,label`` rows with label ``pos`` or ``neg``."""
    text = read_bytes(source).decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or [c.strip() for c in rows[0]] != ["trace_id", "label"]:
        raise TruthError("truth file must start with the header 'trace_id,label'")
    truth: dict[str, bool] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise TruthError(f"line {lineno}: expected 2 fields, got {len(row)}")
        tid, label = row[0], row[1].strip().lower()
        if label not in ("pos", "neg"):
            raise TruthError(f"line {lineno}: label must be 'pos' or 'neg', got {row[1]!r}")
        if tid in truth:
            raise TruthError(f"line {lineno}: duplicate trace id {tid!r}")
        truth[tid] = label == "pos"
    return truth


def pair_with_truth(results: Iterable[ClassificationResult], truth: dict[str, bool]) -> tuple[list[bool], list[bool]]:
    """Align verdicts with labels; every labelled id must be classified and vice versa."""
    predicted, actual = [], []
    seen = set()
    for r in results:
        if r.trace_id not in truth:
            raise TruthError(f"no ground-truth label for trace {r.trace_id!r}")
        seen.add(r.trace_id)
        predicted.append(r.accepted)
        actual.append(truth[r.trace_id])
    missing = [tid for tid in truth if tid not in seen]
    if missing:
        raise TruthError(f"ground truth names unknown trace id {missing[0]!r}")
    return predicted, actual


def format_report(cm: ConfusionMatrix, report: MetricReport) -> str:
    def pct(x: float) -> str:
        return f"{x:.4f}"

    lines = [
        "                 truth +   truth -",
        f"predicted +   {cm.tp:9d} {cm.fp:9d}",
        f"predicted -   {cm.fn:9d} {cm.tn:9d}",
        "",
        f"accuracy        {pct(report.accuracy)}",
        f"mcc             {pct(report.mcc)}",
        f"weighted error  {pct(report.weighted_error)}  (fp penalty {report.alpha_penalty:g}, fn penalty {report.beta_penalty:g})",
        "",
        "target      precision  recall     F(beta=%g)" % report.beta,
        f"positive    {pct(report.precision_pos)}     {pct(report.recall_pos)}     {pct(report.f_pos)}",
        f"negative    {pct(report.precision_neg)}     {pct(report.recall_neg)}     {pct(report.f_neg)}",
    ]
    return "\n".join(lines) + "\n"
