#!/usr/bin/env python3
"""Split conformal prediction with a budget-widened rank.

The split rule thresholds calibration scores at rank
ceil((m+1)(1-alpha)); the modified rule widens it to rank
m + 1 - floor(2 m alpha / 3), which buys a worst-case coverage
guarantee of 1 - alpha - 3/(2m) that holds for every m with no
asymptotics.  The worst case over score positions is computable
exactly, and a grid sweep confirms the guarantee at every m up to
10000.
"""

import numpy as np

from fixedb import (
    SeedSpec,
    conformal_grid_example,
    conformal_grid_sweep,
    conformal_set,
    generator,
)


def main() -> None:
    gen = generator(SeedSpec(31, 0))
    scores = np.abs(gen.standard_normal(100))

    for variant in ("split", "modified"):
        ps = conformal_set(scores, alpha=0.1, variant=variant)
        print(
            f"{variant:<9} rank {ps.rule.upper_rank:>3} of 100"
            f"  threshold {ps.threshold:.3f}"
            f"  contains score 2.0: {ps.contains_score(2.0)}"
        )

    ex = conformal_grid_example(100, 0.1)
    print()
    print(f"exact worst-case coverage at m=100, alpha=0.1: {ex.coverage}")
    print(f"  guarantee 1 - alpha - 3/(2m) = {1 - 0.1 - 3 / 200}")

    report = conformal_grid_sweep()
    print(f"sweep over m in [5, 10000]: {report.n_checked} checks, "
          f"{len(report.violations)} violations")


if __name__ == "__main__":
    main()
