#!/usr/bin/env python3
"""Bootstrap CIs for an exponential mean at tiny resample budgets.

First a single dataset: the three CI variants side by side at B=19.
Then a small coverage experiment over 400 replicates showing how the
vanilla quantile rule falls apart at B=5 while the modified rule holds
its nominal 90% at every budget it accepts.
"""

import numpy as np

from fixedb import SeedSpec, ci_boot, generator, run_experiment


def main() -> None:
    gen = generator(SeedSpec(11, 0))
    x = gen.exponential(scale=0.2, size=100)
    est = float(np.mean(x))
    print(f"one dataset, m=100 draws of Exp(rate 5), sample mean {est:.4f}")
    print("B=25 resamples shared by all three variants, alpha=0.1:")
    for variant in ("vanilla", "modified", "randomized"):
        ci = ci_boot(
            x, np.mean, B=25, alpha=0.1, variant=variant, seed=SeedSpec(11, 1)
        )
        lo, hi = ci.interval.lo, ci.interval.hi
        print(f"  {variant:<11} ({lo:.4f}, {hi:.4f}]  ranks {ci.rule.lower_rank},{ci.rule.upper_rank}")
    print("  (at B=19 all three would coincide; the rank gap opens when "
          "(B+1)alpha/2 is fractional)")

    print()
    print("coverage of the true mean 0.2 over 400 replicates:")
    table = run_experiment(
        {
            "procedure": "bootstrap",
            "setting": 1,
            "B": [5, 19, 59],
            "alpha": [0.1],
            "methods": ["vanilla", "modified"],
            "reps": 400,
            "seed": 20260823,
            "threads": 1,
            "m": 100,
        }
    )
    for row in table.rows:
        print(
            f"  {row.method:<20} B={row.B:<4} coverage {row.coverage:.3f}"
            f"  mean width {row.mean_width:.4f}"
        )
    for skip in table.skipped:
        print(f"  {skip.method:<20} B={skip.B:<4} skipped: {skip.reason}")


if __name__ == "__main__":
    main()
