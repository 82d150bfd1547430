"""Regenerate the synthetic sample logs in samples/.

Draws a reference DCR Graph, simulates a 40-trace training log from it and
a labelled test log (positives are walks of the reference model, negatives
are single-edit mutations it rejects).

    python scripts/make_samples.py [--seed 2019] [--out samples]
"""

import argparse
import os

from dcrmine import dcr
from dcrmine.log_io import EventLog, write_xes
from dcrmine.synthetic import labelled_test_log, random_graph, simulate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2019)
    ap.add_argument("--activities", type=int, default=20)
    ap.add_argument("--out", default="samples")
    args = ap.parse_args()

    reference = random_graph(args.activities, density=0.06, seed=args.seed)
    train = EventLog.from_sequences(simulate(reference, 40, max_length=30, seed=args.seed + 1))
    traces, labels = labelled_test_log(reference, 45, 45, max_length=30, seed=args.seed + 2)
    ids = [f"t{i:03d}" for i in range(len(traces))]
    test = EventLog.from_sequences(traces, ids)

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "process.reference.json"), "wb") as fh:
        fh.write(dcr.to_json(reference))
    with open(os.path.join(args.out, "process-train.xes"), "wb") as fh:
        fh.write(write_xes(train))
    with open(os.path.join(args.out, "process-test.xes"), "wb") as fh:
        fh.write(write_xes(test))
    with open(os.path.join(args.out, "process-test.truth.csv"), "w") as fh:
        fh.write("trace_id,label\n")
        for tid, legal in zip(ids, labels):
            fh.write(f"{tid},{'pos' if legal else 'neg'}\n")
    print(f"train: {len(train)} traces, {train.n_activities} activities, mean length {train.n_events / len(train):.1f}")
    print(f"test: {sum(labels)} positive, {len(labels) - sum(labels)} negative")


if __name__ == "__main__":
    main()
