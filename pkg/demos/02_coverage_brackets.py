#!/usr/bin/env python3
"""Coverage brackets checked against exact enumeration.

Takes a small discrete law, enumerates every outcome of (W_1..W_B, psi)
exactly, and shows that the coverage of the order-statistic interval
[W_(a), W_(B-b)] lands inside the distribution-free bracket

    base - Delta  <=  coverage  <=  base + 1/(B+1) + Delta

with base = 1 - (a+b+1)/(B+1) and Delta the distance of the law of
F0(Z) from uniform.  For continuous IID laws Delta = 0 and the
half-open coverage is an exact rational number.
"""

import itertools
import math
from fractions import Fraction

import numpy as np

from fixedb import (
    CondIIDInstance,
    FinitePmf,
    check_cond_iid,
    exact_coverage_continuous_iid,
    exact_coverage_discrete,
    iid_bracket,
    iid_slacks,
)

ATOMS = (0.0, 1.0, 2.0, 3.0)
PROBS = (0.3, 0.3, 0.2, 0.2)


def iid_joint(B: int) -> FinitePmf:
    """Joint law of B+1 IID draws from (ATOMS, PROBS), pivot last."""
    support = list(itertools.product(ATOMS, repeat=B + 1))
    probs = [math.prod(PROBS[ATOMS.index(v)] for v in tup) for tup in support]
    return FinitePmf(support, probs)


def main() -> None:
    B, a, b = 4, 1, 1
    inst = CondIIDInstance(
        z_probs=PROBS, psi_vals=ATOMS, w_atoms=ATOMS, w_cond=(PROBS,) * 4
    )
    delta, delta_tilde = iid_slacks(inst)
    print(f"slacks of F0(Z) from uniform: delta={delta:.3f} delta_tilde={delta_tilde:.3f}")

    joint = iid_joint(B)
    for kind in ("closed", "left_closed_right_open"):
        cov = exact_coverage_discrete(joint, a, b, kind)
        br = iid_bracket(B, a, b, delta=delta, delta_tilde=delta_tilde, kind=kind)
        inside = br.lower <= cov <= br.upper
        print(
            f"  {kind:<22} exact {cov:.4f} in "
            f"[{br.lower:.4f}, {br.upper:.4f}]  {'ok' if inside else 'VIOLATION'}"
        )

    # Every (a, b, kind) at once, on a genuinely conditional instance.
    mixed = CondIIDInstance(
        z_probs=(0.6, 0.4),
        psi_vals=(0.5, 2.5),
        w_atoms=ATOMS,
        w_cond=((0.4, 0.3, 0.2, 0.1), (0.1, 0.2, 0.3, 0.4)),
    )
    n, violations = check_cond_iid(mixed, B=4)
    print(f"mixed instance: {n} bracket checks, {len(violations)} violations")

    print()
    print("continuous IID laws need no slack; coverage is rational:")
    for B, a, b in ((19, 1, 1), (39, 2, 2), (99, 5, 4)):
        cov = exact_coverage_continuous_iid(B, a, b, "left_closed_right_open")
        assert cov == Fraction(B - a - b, B + 1)
        print(f"  B={B:<4} a={a} b={b}  coverage = {cov} = {float(cov):.4f}")

    # Monte Carlo sanity check of the first line above.
    rng = np.random.default_rng(7)
    B, a, b = 19, 1, 1
    block = rng.standard_normal((100_000, B + 1))
    r = (block[:, :B] < block[:, B:]).sum(axis=1)
    mc = float(((r >= a) & (r <= B - b - 1)).mean())
    print(f"  Monte Carlo at B=19: {mc:.4f} (target 0.8500)")


if __name__ == "__main__":
    main()
