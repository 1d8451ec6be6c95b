#!/usr/bin/env python3
"""Distortion trend over the terminal count, amplified runs vs baseline.

For each k, draws random connected weighted graphs with n = 10k, runs the
ball-growing construction with trial amplification, and prints the best max
stretch next to the nearest-terminal baseline and the polylog budget.

Usage:
    python scripts/distortion_trend.py [--ks 4 8 16] [--instances 5]
                                       [--trials 32] [--seed 0]
"""

import argparse
import math
import statistics

from sprkit import amplify, generate, mix, run_trial


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", type=int, nargs="+", default=[4, 8, 16])
    ap.add_argument("--instances", type=int, default=5)
    ap.add_argument("--trials", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'k':>4} {'n':>5} {'best':>8} {'median':>8} {'worst':>8} {'baseline':>9} {'budget':>10}")
    for k in args.ks:
        n = 10 * k
        budget = 64.0 * math.log2(k) ** 6
        bests, baselines = [], []
        for i in range(args.instances):
            g = generate(
                "gnp_weighted",
                seed=mix(args.seed, k, i),
                n=n,
                k=k,
                p=min(0.5, 1.3 * math.log(n) / n),
                wmin=1.0,
                wmax=16.0,
            )
            amped = amplify(g, "alg1", trials=args.trials, seed=mix(args.seed, k, i, 1))
            stretches = sorted(t.max_stretch for t in amped.trials)
            baseline = run_trial(g, "baseline", 0)
            bests.append(amped.best_max_stretch)
            baselines.append(baseline.max_stretch)
            print(
                f"{k:>4} {n:>5} {amped.best_max_stretch:>8.3f} "
                f"{stretches[len(stretches) // 2]:>8.3f} {stretches[-1]:>8.3f} "
                f"{baseline.max_stretch:>9.3f} {budget:>10.0f}"
            )
        print(
            f"   aggregate: median best {statistics.median(bests):.3f}, "
            f"median baseline {statistics.median(baselines):.3f}\n"
        )


if __name__ == "__main__":
    main()
