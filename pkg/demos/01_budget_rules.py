#!/usr/bin/env python3
"""Index rules at a glance.

For a handful of budgets B this prints the rank pair (lower, upper)
chosen by the vanilla and modified two-sided rules, the minimal budget
each named rule needs before it can reject or exclude anything, and
the mixing weight used by the randomized upper rank.  The point to
notice: vanilla ranks pretend B is large, while the modified ranks
keep honest coverage at any fixed B in exchange for a slightly wider
bracket.
"""

from fixedb import BudgetSpec, BudgetTooSmall, index_rule, min_budget, tau_randomization

ALPHA = 0.1


def main() -> None:
    print(f"two-sided rules at alpha={ALPHA}")
    print(f"{'B':>5} {'vanilla':>12} {'modified':>12}")
    for B in (5, 9, 19, 20, 25, 47, 99):
        spec = BudgetSpec(B=B, alpha=ALPHA)
        try:
            v = index_rule(spec, "vanilla_two_sided")
            van = f"({v.lower_rank},{v.upper_rank})"
        except BudgetTooSmall:
            van = "too small"
        try:
            m = index_rule(spec, "mod_two_sided")
            mod = f"({m.lower_rank},{m.upper_rank})"
        except BudgetTooSmall:
            mod = "too small"
        print(f"{B:>5} {van:>12} {mod:>12}")
    print("  (the pairs coincide exactly when (B+1)alpha/2 is an integer, e.g. B=19)")

    print()
    print("smallest informative budget B = ceil(k/alpha - 1):")
    for alpha in (0.1, 0.05, 0.3):
        one, two = min_budget(alpha, "one"), min_budget(alpha, "two")
        print(f"  alpha={alpha:<5} one-sided {one:>3}   two-sided {two:>3}")

    print()
    print("randomized upper rank mixes ceil/floor of (B+1)(1-alpha):")
    for B in (19, 20, 25):
        tau = tau_randomization(BudgetSpec(B=B, alpha=ALPHA))
        t = (B + 1) * (1 - ALPHA)
        print(f"  B={B:<4} target rank {t:6.2f}  weight on ceil = {tau:.2f}")


if __name__ == "__main__":
    main()
