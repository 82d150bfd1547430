"""Command-line entry point: ``dcrmine {mine,classify,evaluate,bench,export}``.

Exit codes: 0 success, 1 malformed input (log, model, truth file),
2 I/O failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from typing import Sequence

from . import dcr
from .evaluate import classify, confusion, format_report, metrics, pair_with_truth, read_truth
from .log_io import EventLog, load_log, write_classifications
from .miner import MinerConfig, mine, run_pipeline

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_IO = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_log_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--log", required=True, help="event log (XES or text)")
    p.add_argument("--format", choices=("xes", "txt"), help="log format; default from the file extension")
    p.add_argument("--delimiter", default=",", help="activity separator for text logs (default ',')")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dcrmine", description="Discover DCR Graphs from event logs and classify traces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mine", help="mine a model from a log")
    _add_log_args(p)
    p.add_argument("--out", required=True, help="model JSON output path")
    p.add_argument("--dot", help="also write a Graphviz rendering")
    p.add_argument("--verbose", action="store_true", help="print stage diagnostics as JSON on stderr")
    p.add_argument(
        "--cartesian-self-excl",
        action="store_true",
        help="exclude every at-most-once activity from every other one, not only itself",
    )

    p = sub.add_parser("classify", help="accept or reject each trace of a log")
    p.add_argument("--model", required=True)
    _add_log_args(p)
    p.add_argument("--out", required=True, help="classification CSV output path")
    p.add_argument("--unknown", choices=("reject", "error"), default="reject", help="policy for unseen activities")

    p = sub.add_parser("evaluate", help="classify a labelled log and report metrics")
    p.add_argument("--model", required=True)
    _add_log_args(p)
    p.add_argument("--truth", required=True, help="CSV with header trace_id,label (label pos|neg)")
    p.add_argument("--beta", type=float, default=1.0, help="F-score weight (default 1)")
    p.add_argument("--alpha", type=float, default=1.0, help="penalty per false positive (default 1)")
    p.add_argument("--beta-penalty", type=float, default=1.0, help="penalty per false negative (default 1)")
    p.add_argument("--printed-fbeta", action="store_true", help="use beta rather than beta^2 in the F denominator")
    p.add_argument("--unknown", choices=("reject", "error"), default="reject")
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("bench", help="time repeated mining of a log")
    _add_log_args(p)
    p.add_argument("--runs", type=int, default=100, help="timed runs after one warm-up (default 100)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("export", help="render a model as Graphviz DOT")
    p.add_argument("--model", required=True)
    p.add_argument("--dot", required=True)
    return parser


def _read_model(path: str) -> dcr.DcrGraph:
    with open(path, "rb") as fh:
        return dcr.from_json(fh.read())


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def _load(args) -> EventLog:
    return load_log(args.log, args.format, args.delimiter)


def cmd_mine(args) -> int:
    log = _load(args)
    config = MinerConfig(self_exclusion_only=not args.cartesian_self_excl, txt_delimiter=args.delimiter)
    graph, diag = run_pipeline(log, config)
    _write(args.out, dcr.to_json(graph))
    if args.dot:
        _write(args.dot, dcr.to_dot(graph))
    if args.verbose:
        json.dump(diag.to_dict(graph.labels), sys.stderr, indent=2)
        sys.stderr.write("\n")
    return EXIT_OK


def cmd_classify(args) -> int:
    graph = _read_model(args.model)
    log = _load(args)
    results = classify(graph, log, args.unknown)
    _write(args.out, write_classifications(results))
    accepted = sum(r.accepted for r in results)
    print(f"accepted {accepted}, rejected {len(results) - accepted}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    graph = _read_model(args.model)
    log = _load(args)
    with open(args.truth, "rb") as fh:
        truth = read_truth(fh.read())
    results = classify(graph, log, args.unknown)
    predicted, actual = pair_with_truth(results, truth)
    cm = confusion(predicted, actual)
    report = metrics(cm, beta=args.beta, alpha=args.alpha, beta_penalty=args.beta_penalty, printed_f_beta=args.printed_fbeta)
    if args.json:
        doc = {"confusion": {"tp": cm.tp, "fp": cm.fp, "fn": cm.fn, "tn": cm.tn}, "metrics": report.to_dict()}
        print(json.dumps(doc, indent=2))
    else:
        sys.stdout.write(format_report(cm, report))
    return EXIT_OK


def bench_log(log: EventLog, runs: int, config: MinerConfig = MinerConfig()) -> dict:
    """Mine ``runs`` times after one untimed warm-up; times in milliseconds."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    mine(log, config)
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        mine(log, config)
        times.append((time.perf_counter() - start) * 1000.0)
    return {
        "runs": runs,
        "mean_ms": statistics.fmean(times),
        "min_ms": min(times),
        "max_ms": max(times),
        "activities": log.n_activities,
        "traces": len(log.traces),
        "mean_trace_length": log.n_events / len(log.traces),
    }


def cmd_bench(args) -> int:
    log = _load(args)
    stats = bench_log(log, args.runs)
    if args.json:
        print(json.dumps(stats, indent=2))
    else:
        print("runs  mean_ms   min_ms    max_ms    activities  traces  mean_len")
        print(
            f"{stats['runs']:<5d} {stats['mean_ms']:<9.3f} {stats['min_ms']:<9.3f} {stats['max_ms']:<9.3f} "
            f"{stats['activities']:<11d} {stats['traces']:<7d} {stats['mean_trace_length']:.2f}"
        )
    return EXIT_OK


def cmd_export(args) -> int:
    graph = _read_model(args.model)
    _write(args.dot, dcr.to_dot(graph))
    return EXIT_OK


COMMANDS = {
    "mine": cmd_mine,
    "classify": cmd_classify,
    "evaluate": cmd_evaluate,
    "bench": cmd_bench,
    "export": cmd_export,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "runs", 1) < 1:
        print("dcrmine: error: --runs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"dcrmine: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"dcrmine: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
