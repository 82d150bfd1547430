import math
import statistics

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from dcrmine.dcr import DcrGraph
from dcrmine.evaluate import (
    ConfusionMatrix,
    TruthError,
    UnknownActivityError,
    classify,
    confusion,
    f_beta,
    format_report,
    mcc,
    metrics,
    pair_with_truth,
    read_truth,
)
from dcrmine.log_io import EventLog

RESP = DcrGraph.from_pairs(["a", "b"], responses={(0, 1)})


def test_classify_response_graph():
    log = EventLog.from_sequences([["a", "b"], ["a"]])
    res = classify(RESP, log)
    assert [r.accepted for r in res] == [True, False]
    assert str(res[1].reason) == "non-accepting"


def test_classify_unknown_activity_rejects():
    log = EventLog.from_sequences([["a", "z"]], ["t1"])
    (r,) = classify(RESP, log)
    assert not r.accepted
    assert str(r.reason) == "unknown-activity:z"


def test_classify_unknown_activity_error_names_trace_and_label():
    log = EventLog.from_sequences([["a", "z"]], ["t1"])
    with pytest.raises(UnknownActivityError, match="t1.*z"):
        classify(RESP, log, policy="error")


def test_classify_maps_labels_by_name():
    # log interns b first; the model has a first
    log = EventLog.from_sequences([["b"], ["a", "b"]])
    assert [r.accepted for r in classify(RESP, log)] == [True, True]


def test_empty_relation_graph_accepts_everything():
    g = DcrGraph.from_pairs(["a", "b", "c"])
    log = EventLog.from_sequences([["c", "a", "c"], ["b"], ["a", "b", "c", "a"]])
    assert all(r.accepted for r in classify(g, log))


def test_disabled_reason_has_position():
    g = DcrGraph.from_pairs(["a", "b"], conditions={(0, 1)})
    (r,) = classify(g, EventLog.from_sequences([["b"]]))
    assert str(r.reason) == "disabled@0"


@pytest.mark.parametrize(
    "predicted, truth, expected",
    [
        ([True] * 10 + [False] * 10, [True] * 10 + [False] * 10, (10, 0, 0, 10)),
        ([True] * 20, [True] * 10 + [False] * 10, (10, 10, 0, 0)),
    ],
)
def test_confusion(predicted, truth, expected):
    cm = confusion(predicted, truth)
    assert (cm.tp, cm.fp, cm.fn, cm.tn) == expected


def test_confusion_length_mismatch():
    with pytest.raises(ValueError):
        confusion([True], [True, False])


def test_published_aggregate_matrix():
    r = metrics(ConfusionMatrix(448, 30, 5, 417))
    published = {
        "accuracy": 0.961,
        "precision_pos": 0.94,
        "recall_pos": 0.99,
        "f_pos": 0.96,
        "precision_neg": 0.99,
        "recall_neg": 0.93,
        "f_neg": 0.96,
        "mcc": 0.92,
    }
    for key, value in published.items():
        assert abs(getattr(r, key) - value) <= 0.005, key
    assert r.accuracy == pytest.approx(0.9611, abs=5e-5)
    assert r.mcc == pytest.approx(0.924, abs=5e-4)


def test_perfect_classifier():
    r = metrics(ConfusionMatrix(7, 0, 0, 7))
    for key in ("accuracy", "precision_pos", "recall_pos", "f_pos", "precision_neg", "recall_neg", "f_neg", "mcc"):
        assert getattr(r, key) == 1.0
    assert r.weighted_error == 0.0


def expand(cm):
    pred = [1] * cm.tp + [1] * cm.fp + [0] * cm.fn + [0] * cm.tn
    true = [1] * cm.tp + [0] * cm.fp + [1] * cm.fn + [0] * cm.tn
    return pred, true


def test_mcc_equals_pearson_on_small_matrix():
    cm = ConfusionMatrix(10, 10, 5, 2)
    pred, true = expand(cm)
    assert len(pred) == 27
    assert mcc(cm) == pytest.approx(statistics.correlation(pred, true), abs=1e-12)


def test_mcc_zero_denominator():
    assert mcc(ConfusionMatrix(5, 5, 0, 0)) == 0.0


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        metrics(ConfusionMatrix(0, 0, 0, 0))


def test_printed_f_beta_differs_only_when_beta_not_one():
    assert f_beta(0.5, 0.8, 1.0, printed=True) == f_beta(0.5, 0.8, 1.0)
    assert f_beta(0.5, 0.8, 2.0, printed=True) != f_beta(0.5, 0.8, 2.0)
    assert f_beta(0.5, 0.8, 2.0) == pytest.approx(5 * 0.5 * 0.8 / (4 * 0.5 + 0.8))


counts = st.integers(0, 60)
matrices = st.builds(ConfusionMatrix, counts, counts, counts, counts).filter(lambda c: c.total > 0)


@given(matrices)
def test_mcc_is_pearson(cm):
    pred, true = expand(cm)
    assume(len(set(pred)) > 1 and len(set(true)) > 1)
    assert mcc(cm) == pytest.approx(statistics.correlation(pred, true), abs=1e-9)


@given(matrices)
def test_f1_is_harmonic_mean(cm):
    r = metrics(cm)
    for p, rec, f in ((r.precision_pos, r.recall_pos, r.f_pos), (r.precision_neg, r.recall_neg, r.f_neg)):
        expected = 0.0 if p == 0 or rec == 0 else statistics.harmonic_mean([p, rec])
        assert f == pytest.approx(expected, abs=1e-12)


@given(matrices)
def test_transposition_swaps_framings(cm):
    a, b = metrics(cm), metrics(cm.transposed())
    assert (a.precision_pos, a.recall_pos) == (b.precision_neg, b.recall_neg)
    assert (a.precision_neg, a.recall_neg) == (b.precision_pos, b.recall_pos)
    assert a.accuracy == b.accuracy
    assert abs(a.mcc) == pytest.approx(abs(b.mcc), abs=1e-12)


@given(matrices)
def test_unit_penalties_give_error_rate(cm):
    assert metrics(cm).weighted_error == pytest.approx(1 - metrics(cm).accuracy, abs=1e-12)


@given(matrices)
def test_ranges(cm):
    r = metrics(cm, beta=2.0, alpha=3.0, beta_penalty=0.5)
    for key in ("accuracy", "precision_pos", "recall_pos", "f_pos", "precision_neg", "recall_neg", "f_neg"):
        assert 0.0 <= getattr(r, key) <= 1.0
    assert -1.0 - 1e-12 <= r.mcc <= 1.0 + 1e-12
    assert not math.isnan(r.weighted_error)


def test_read_truth():
    assert read_truth(b"trace_id,label\nt1,pos\nt2,NEG\n") == {"t1": True, "t2": False}


@pytest.mark.parametrize(
    "data",
    [b"", b"id,label\n", b"trace_id,label\nt1,maybe\n", b"trace_id,label\nt1,pos\nt1,neg\n", b"trace_id,label\nt1\n"],
)
def test_read_truth_errors(data):
    with pytest.raises(TruthError):
        read_truth(data)


def test_pairing_errors():
    res = classify(RESP, EventLog.from_sequences([["a", "b"]], ["t1"]))
    with pytest.raises(TruthError, match="t1"):
        pair_with_truth(res, {})
    with pytest.raises(TruthError, match="t9"):
        pair_with_truth(res, {"t1": True, "t9": False})
    assert pair_with_truth(res, {"t1": False}) == ([True], [False])


def test_format_report_mentions_penalties():
    cm = ConfusionMatrix(2, 1, 2, 4)
    text = format_report(cm, metrics(cm, alpha=2.0, beta_penalty=0.5))
    assert "fp penalty 2" in text and "fn penalty 0.5" in text
