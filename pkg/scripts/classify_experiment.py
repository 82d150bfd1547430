"""Mine on training logs, classify labelled test logs, report aggregate metrics.

Either a contest-style directory (see dcrmine.contest):

    python scripts/classify_experiment.py --dataset DIR

or a single train / test / truth triple:

    python scripts/classify_experiment.py --train samples/process-train.xes \
        --test samples/process-test.xes --truth samples/process-test.truth.csv
"""

import argparse
import sys

from dcrmine.contest import find_pairs
from dcrmine.evaluate import classify, confusion, format_report, metrics, pair_with_truth, read_truth
from dcrmine.log_io import load_log
from dcrmine.miner import mine


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dataset")
    ap.add_argument("--train")
    ap.add_argument("--test")
    ap.add_argument("--truth")
    args = ap.parse_args()

    predicted, actual = [], []
    if args.dataset:
        pairs = find_pairs(args.dataset)
        if not pairs:
            sys.exit(f"no labelled log pairs under {args.dataset}")
        for pair in pairs:
            results = [r for r in classify(mine(load_log(str(pair.train))), pair.test) if r.trace_id in pair.labels]
            p, a = pair_with_truth(results, {r.trace_id: pair.labels[r.trace_id] for r in results})
            cm = confusion(p, a)
            print(f"log {pair.key}: tp {cm.tp} fp {cm.fp} fn {cm.fn} tn {cm.tn}")
            predicted += p
            actual += a
    elif args.train and args.test and args.truth:
        with open(args.truth, "rb") as fh:
            truth = read_truth(fh.read())
        results = classify(mine(load_log(args.train)), load_log(args.test))
        predicted, actual = pair_with_truth(results, truth)
    else:
        ap.error("give --dataset, or all of --train, --test and --truth")

    cm = confusion(predicted, actual)
    sys.stdout.write(format_report(cm, metrics(cm)))


if __name__ == "__main__":
    main()
