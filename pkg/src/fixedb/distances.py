"""Discrepancy metrics between distributions and samples.

Four metrics drive every coverage bound in this package:

* ``ks``      - sup_t |F(t) - G(t)|, the classical Kolmogorov-Smirnov
  distance over half-lines (-inf, t].
* ``mod_ks``  - the same supremum taken over half-open intervals (a, b].
  It satisfies ks <= mod_ks <= min(2 ks, tv).
* ``tv``      - total variation, half the L1 distance between pmfs.
* ``gamma``   - the exchangeability gap of a joint law: the total
  variation distance between the law of V = (W_1..W_B, psi) and the
  uniform mixture of its coordinate-swap laws.  Zero whenever V is
  exchangeable.

The sample-based estimators evaluate empirical CDFs at both one-sided
limits of every breakpoint, so the supremum is exact for step functions.
The Levy concentration function measures the largest mass any window of
width eps can capture and quantifies how discrete a sample is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityExceeded, InvalidInput

__all__ = [
    "DistanceEstimate",
    "FinitePmf",
    "ks_uniform",
    "mod_ks_uniform",
    "tv_discrete",
    "gamma_exact",
    "concentration",
    "ks_two_sample",
]

#: Refuse exact joint enumerations above this many (atom, swap) pairs.
ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class DistanceEstimate:
    """A metric value in [0, 1] with its provenance.

    ``exact`` is True when the value comes from exhaustive enumeration
    or a closed-form supremum, False for sample-based estimates.
    """

    value: float
    metric: str
    exact: bool


class FinitePmf:
    """A finitely supported probability mass function.

    Atoms may be scalars or (for joint laws) equal-length tuples; they
    must be distinct, and the probabilities must sum to 1 within 1e-9.
    """

    __slots__ = ("support", "probs")

    def __init__(self, support, probs):
        support = list(support)
        probs = np.asarray(probs, dtype=float)
        if len(support) != probs.shape[0]:
            raise InvalidInput("support and probs must have equal length")
        if len(set(support)) != len(support):
            raise InvalidInput("support atoms must be distinct")
        if np.any(probs < -1e-15):
            raise InvalidInput("probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > 1e-9:
            raise InvalidInput(f"probabilities sum to {probs.sum()}, not 1")
        self.support = support
        self.probs = np.clip(probs, 0.0, None)

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.probs))

    def __len__(self) -> int:
        return len(self.support)


def _validate_unit(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise InvalidInput("sample must be a non-empty 1-d vector")
    if np.any(np.isnan(u)) or np.any(u < 0.0) or np.any(u > 1.0):
        raise InvalidInput("samples must lie in [0, 1]")
    return np.sort(u)


def _one_sided_sups(u_sorted: np.ndarray) -> tuple[float, float]:
    """(D+, D-) of the empirical CDF against the unit uniform.

    D+ = sup_t (F_n(t) - t) is attained at a sample point from the right
    limit; D- = sup_t (t - F_n(t)) just before a sample point (or at 1).
    Both are clipped at zero.
    """
    n = u_sorted.size
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - u_sorted))
    d_minus = float(np.max(u_sorted - (i - 1) / n))
    return max(0.0, d_plus), max(0.0, d_minus)


def ks_uniform(u_samples) -> DistanceEstimate:
    """Exact KS distance of an empirical CDF on [0, 1] from U(0, 1)."""
    d_plus, d_minus = _one_sided_sups(_validate_unit(u_samples))
    return DistanceEstimate(max(d_plus, d_minus), "ks", exact=True)


def mod_ks_uniform(u_samples) -> DistanceEstimate:
    """Exact interval-KS distance of an empirical CDF from U(0, 1).

    Computed as D+ + D-: the interval discrepancy over (a, b] equals
    g(b) - g(a) with g = F_n - id, and the supremum of |g(b) - g(a)|
    is sup g + sup(-g) regardless of where the two optima sit, because
    g vanishes at both ends of [0, 1].
    """
    d_plus, d_minus = _one_sided_sups(_validate_unit(u_samples))
    return DistanceEstimate(d_plus + d_minus, "mod_ks", exact=True)


def tv_discrete(p: FinitePmf, q: FinitePmf) -> DistanceEstimate:
    """Total variation distance between two finite pmfs.

    Supports are merged with zero fill, so the atoms need not coincide.
    """
    pd, qd = p.as_dict(), q.as_dict()
    atoms = set(pd) | set(qd)
    tv = 0.5 * math.fsum(abs(pd.get(x, 0.0) - qd.get(x, 0.0)) for x in atoms)
    return DistanceEstimate(min(1.0, tv), "tv", exact=True)


def gamma_exact(joint: FinitePmf) -> DistanceEstimate:
    """Exchangeability gap of a finite joint law over (B+1)-tuples.

    The last coordinate plays the target psi(Z).  Materializes the B+1
    swapped laws V^i (coordinate i exchanged with the last; V^{B+1} = V),
    averages them, and returns the total variation distance to the
    original law.  For finite supports the supremum over measurable sets
    in the definition is attained by this TV form.
    """
    if not joint.support:
        raise InvalidInput("joint support is empty")
    first = joint.support[0]
    if not isinstance(first, tuple):
        raise InvalidInput("joint atoms must be tuples (W_1..W_B, psi)")
    width = len(first)
    if width < 2:
        raise InvalidInput("joint atoms need at least two coordinates")
    if any(not isinstance(t, tuple) or len(t) != width for t in joint.support):
        raise InvalidInput("all joint atoms must be tuples of equal length")
    if len(joint) * width > ENUMERATION_CAP:
        raise CapacityExceeded(
            f"{len(joint)} atoms x {width} swaps exceeds the cap of {ENUMERATION_CAP}"
        )

    mixture: dict[tuple, float] = {}
    share = 1.0 / width
    for atom, prob in zip(joint.support, joint.probs):
        w = share * float(prob)
        for i in range(width - 1):
            swapped = atom[:i] + (atom[-1],) + atom[i + 1 : -1] + (atom[i],)
            mixture[swapped] = mixture.get(swapped, 0.0) + w
        mixture[atom] = mixture.get(atom, 0.0) + w  # identity swap V^{B+1} = V

    orig = joint.as_dict()
    atoms = set(orig) | set(mixture)
    gap = 0.5 * math.fsum(abs(orig.get(x, 0.0) - mixture.get(x, 0.0)) for x in atoms)
    return DistanceEstimate(min(1.0, gap), "gamma", exact=True)


def concentration(samples, eps: float) -> float:
    """Empirical Levy concentration: the largest fraction of the sample
    any half-open window (a, a + eps] can capture.

    Window left endpoints are swept over the sample points and the
    sample points minus eps; that family attains the supremum for
    half-open windows over a finite sample.
    """
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise InvalidInput("sample must be non-empty")
    best = 0
    for a in np.concatenate([x, x - eps]):
        # count of points in (a, a + eps]
        cnt = np.searchsorted(x, a + eps, side="right") - np.searchsorted(x, a, side="right")
        best = max(best, int(cnt))
    return best / x.size


def ks_two_sample(x, y) -> DistanceEstimate:
    """Classical two-sample KS statistic over merged breakpoints."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    if x.size == 0 or y.size == 0:
        raise InvalidInput("both samples must be non-empty")
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / x.size
    fy = np.searchsorted(y, grid, side="right") / y.size
    return DistanceEstimate(float(np.max(np.abs(fx - fy))), "ks", exact=True)
