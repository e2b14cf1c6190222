"""Exact discrete-distribution kernels behind the coverage guarantees.

The conditionally independent (non-identical) case reduces to comparing
a Poisson-binomial count of "resample below target" events with the
binomial count it would be if the success probabilities were averaged.
This module provides the exact Poisson-binomial pmf, the binomial CDF,
the I_B constant that multiplies the heterogeneity term in the coverage
slack, the Ehm total-variation bound, and the Hoeffding tail-ordering
check between the two counting laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .distances import FinitePmf
from .errors import DegenerateSpec, InvalidInput

__all__ = [
    "PoiBinSpec",
    "OrderingReport",
    "binom_cdf",
    "binom_pmf",
    "poisson_binomial_pmf",
    "poisson_binomial_pmf_batch",
    "i_b",
    "ehm_tv_bound",
    "hoeffding_ordering_check",
]


@dataclass(frozen=True)
class PoiBinSpec:
    """Success probabilities p_1..p_B of independent Bernoulli trials."""

    probs: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidInput("probs must be a non-empty 1-d vector")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise InvalidInput("all success probabilities must lie in [0, 1]")
        object.__setattr__(self, "probs", tuple(float(v) for v in p))

    @property
    def b(self) -> int:
        return len(self.probs)

    @property
    def p_bar(self) -> float:
        return math.fsum(self.probs) / self.b


@dataclass(frozen=True)
class OrderingReport:
    """Result of the Hoeffding tail-ordering check.

    ``worst_margin`` is the smallest signed slack over all checked tail
    indices (negative means a violation); ``n_checked`` counts the
    indices that fall under one of the two ordering regimes.
    """

    passed: bool
    worst_margin: float
    n_checked: int


def binom_cdf(B: int, p: float, k: int) -> float:
    """P(Bin(B, p) <= k); 0 below the support and 1 at or above B."""
    if B < 1:
        raise InvalidInput("B must be >= 1")
    if k < 0:
        return 0.0
    if k >= B:
        return 1.0
    return float(stats.binom.cdf(k, B, p))


def binom_pmf(B: int, p: float) -> FinitePmf:
    """The Bin(B, p) pmf on {0..B} as a :class:`FinitePmf`."""
    return FinitePmf(list(range(B + 1)), stats.binom.pmf(np.arange(B + 1), B, p))


def poisson_binomial_pmf_batch(prob_rows: np.ndarray) -> np.ndarray:
    """Poisson-binomial pmfs for many specs at once.

    ``prob_rows`` has shape (n, B); row j holds the success
    probabilities of spec j.  Returns shape (n, B+1).  Exact dynamic
    programming: fold one Bernoulli at a time.
    """
    prob_rows = np.atleast_2d(np.asarray(prob_rows, dtype=float))
    n, B = prob_rows.shape
    pmf = np.zeros((n, B + 1))
    pmf[:, 0] = 1.0
    for i in range(B):
        p = prob_rows[:, i : i + 1]
        shifted = np.concatenate([np.zeros((n, 1)), pmf[:, :-1]], axis=1)
        pmf = pmf * (1.0 - p) + shifted * p
    return pmf


def poisson_binomial_pmf(spec: PoiBinSpec) -> FinitePmf:
    """Exact pmf of a sum of independent Bernoulli(p_i) on {0..B}."""
    row = poisson_binomial_pmf_batch(np.asarray(spec.probs)[None, :])[0]
    return FinitePmf(list(range(spec.b + 1)), row)


def i_b(B: int) -> float:
    """The heterogeneity constant: 1 for B <= 4, else
    1 - sqrt(1 - 4/B) + (2/B) log((1 + sqrt(1 - 4/B)) / (1 - sqrt(1 - 4/B))).

    Evaluated through the identity 1 - s = 4 / (B (1 + s)) with
    s = sqrt(1 - 4/B), which removes the catastrophic cancellation of
    the literal formula for large B; no series fallback is needed.
    Asymptotically B * i_b(B) -> 2 log B + 2.
    """
    if B < 1:
        raise InvalidInput("B must be >= 1")
    if B <= 4:
        return 1.0
    s = math.sqrt(1.0 - 4.0 / B)
    return 4.0 / (B * (1.0 + s)) + (2.0 / B) * math.log(B * (1.0 + s) ** 2 / 4.0)


def ehm_tv_bound(spec: PoiBinSpec) -> tuple[float, float]:
    """Upper bound on d_TV(PoiBin(p_1..p_B), Bin(B, p_bar)).

    Returns ``(upper, r)`` with
    r = 1 - sum p_i (1 - p_i) / (B p_bar q_bar) and
    upper = (B / (B+1)) (1 - p_bar^{B+1} - q_bar^{B+1}) r.
    The matching lower bound has an unspecified universal constant, so
    only the upper bound is exposed; ``r`` alone is returned for callers
    who want the heterogeneity factor.
    """
    p_bar = spec.p_bar
    q_bar = 1.0 - p_bar
    if p_bar <= 0.0 or p_bar >= 1.0:
        raise DegenerateSpec("mean success probability is 0 or 1; the TV distance is 0")
    r = 1.0 - math.fsum(p * (1.0 - p) for p in spec.probs) / (spec.b * p_bar * q_bar)
    upper = (spec.b / (spec.b + 1)) * (1.0 - p_bar ** (spec.b + 1) - q_bar ** (spec.b + 1)) * r
    return upper, r


def hoeffding_ordering_check(spec: PoiBinSpec, tol: float = 1e-12) -> OrderingReport:
    """Verify the tail ordering between PoiBin and its mean binomial.

    For every integer k: P(PoiBin <= k) <= P(Bin(B, p_bar) <= k) when
    k <= B p_bar - 1, and >= when k >= B p_bar.  Indices in the open gap
    (B p_bar - 1, B p_bar) are unconstrained and skipped.
    """
    B = spec.b
    p_bar = spec.p_bar
    poi_cdf = np.cumsum(poisson_binomial_pmf(spec).probs)
    margins = []
    for k in range(B + 1):
        bin_k = binom_cdf(B, p_bar, k)
        if k <= B * p_bar - 1.0:
            margins.append(bin_k - float(poi_cdf[k]))
        elif k >= B * p_bar:
            margins.append(float(poi_cdf[k]) - bin_k)
    worst = min(margins) if margins else math.inf
    return OrderingReport(passed=worst >= -tol, worst_margin=worst, n_checked=len(margins))
