"""Run the randomized verification battery at desk scale.

Drives the same batches the acceptance tests freeze: four batches over
Gauss valuations whose residue algebra is division, then three batches
over p-adic valuations where the conic has a unit point.  Prints one
summary line per batch and exits nonzero if any instance fails.
"""

import argparse
import sys
import time

from quatwitt.cli import run_batch
from quatwitt.scenarios import load_scenario

DIVISION_BATCHES = ((3, "-1"), (5, "2"), (7, "3"), (13, "2"))
SPLIT_PRIMES = (3, 5, 7)


def division_scenario(p, d, trials, seed):
    return load_scenario({
        "field": {"kind": "function", "base": {"kind": "rationals"}, "variable": "s"},
        "valuation": {"kind": "gauss", "inner": {"kind": "padic", "p": p}},
        "generator": "conic",
        "algebra": {"d": d, "t": "s"},
        "seed": seed,
        "trials": trials,
    })


def split_scenario(p, trials, seed):
    return load_scenario({
        "field": {"kind": "rationals"},
        "valuation": {"kind": "padic", "p": p},
        "generator": "point",
        "seed": seed,
        "trials": trials,
    })


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200, help="instances per batch")
    ap.add_argument("--seed", type=int, default=42, help="generator seed")
    args = ap.parse_args(argv)

    failures = 0
    start = time.monotonic()
    for p, d in DIVISION_BATCHES:
        sc = division_scenario(p, d, args.trials, args.seed)
        _, counts, counterexample = run_batch(sc, args.trials)
        ok = counts["verified"] == args.trials
        failures += 0 if ok else 1
        print(f"division branch p={p:<2} d={d:>2}: verified {counts['verified']}/{args.trials}"
              f"  ({time.monotonic() - start:.1f}s)")
        if counterexample is not None:
            print(f"  counterexample at index {counterexample['index']}")
    for p in SPLIT_PRIMES:
        sc = split_scenario(p, args.trials, args.seed)
        _, counts, counterexample = run_batch(sc, args.trials)
        ok = counts["verified"] == args.trials
        failures += 0 if ok else 1
        print(f"split branch    p={p:<2}      : verified {counts['verified']}/{args.trials}"
              f"  ({time.monotonic() - start:.1f}s)")
        if counterexample is not None:
            print(f"  counterexample at index {counterexample['index']}")
    print(f"total wall time {time.monotonic() - start:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
