#!/usr/bin/env python3
"""Benchmark the compiled text kernel against the pure-Python fallback.

The near-duplicate pass is the pipeline's only O(n^2) loop: every candidate
pair within a relation group gets two token-set Jaccard comparisons. This
script times pair_links on synthetic candidate sets of growing size and
prints the per-backend timings plus speedup.

    python3 benchmarks/bench_textkernel.py [--sizes 200,500,1000,2000] [--repeat 3]
"""

import argparse
import random
import time

from ontoforge.kernels import available_backends


def synthetic_fields(n, rng):
    vocab = [
        "decline", "in", "international", "tourist", "arrivals", "loss", "of",
        "revenue", "for", "airlines", "reduction", "tourism", "spending",
        "closure", "travel", "agencies", "growth", "virtual", "experiences",
        "drop", "hotel", "bookings", "seasonal", "employment", "impact",
    ]
    relations = ["instance of", "has part", "symptoms and signs", "manufacturer"]
    rels, subs, objs = [], [], []
    for _ in range(n):
        rels.append(rng.choice(relations))
        subs.append(" ".join(rng.choice(vocab) for _ in range(rng.randint(1, 4))))
        objs.append(" ".join(rng.choice(vocab) for _ in range(rng.randint(2, 6))))
    return rels, subs, objs


def time_backend(module, fields, threshold, repeat):
    rels, subs, objs = fields
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = module.pair_links(rels, subs, objs, threshold)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,500,1000,2000")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--threshold", type=float, default=0.5)
    args = parser.parse_args()

    backends = available_backends()
    names = sorted(backends)
    if len(names) == 1:
        print(f"only the {names[0]} backend is available; build the extension to compare")
    header = f"{'n':>6} " + " ".join(f"{name:>12}" for name in names)
    if len(names) == 2:
        header += f" {'speedup':>9}"
    print(header)

    rng = random.Random(1)
    for size in [int(s) for s in args.sizes.split(",")]:
        fields = synthetic_fields(size, rng)
        timings = {}
        links = {}
        for name in names:
            timings[name], links[name] = time_backend(
                backends[name], fields, args.threshold, args.repeat
            )
        results = list(links.values())
        assert all(r == results[0] for r in results), "backends disagree"
        row = f"{size:>6} " + " ".join(f"{timings[name] * 1000:>10.2f}ms" for name in names)
        if len(names) == 2:
            row += f" {timings['python'] / timings['cython']:>8.1f}x"
        print(row + f"   ({len(results[0])} links)")


if __name__ == "__main__":
    main()
