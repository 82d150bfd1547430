"""Mining time against log size on uniform synthetic logs.

    python scripts/bench_scaling.py [--activities 40] [--length 20] [--sizes 500 1000 2000 4000 8000]

Prints best-of-k wall-clock time per size and the ratio to the previous size.
"""

import argparse
import time

from dcrmine.miner import mine
from dcrmine.synthetic import uniform_log


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--activities", type=int, default=40)
    ap.add_argument("--length", type=int, default=20)
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 1000, 2000, 4000, 8000])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'traces':>8} {'events':>9} {'best ms':>9} {'ratio':>6}")
    prev = None
    for n in args.sizes:
        log = uniform_log(n, args.activities, args.length, seed=args.seed)
        best = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            mine(log)
            best = min(best, time.perf_counter() - t0)
        ratio = f"{best / prev:6.2f}" if prev else "     -"
        print(f"{n:8d} {log.n_events:9d} {best * 1000:9.1f} {ratio}")
        prev = best


if __name__ == "__main__":
    main()
