"""Inference procedures built on order statistics of B resamples.

Confidence intervals (bootstrap, subsampling, averaged SGD) come in
three variants: "vanilla" uses the classical quantile ranks
ceil(B alpha/2) and ceil(B (1-alpha/2)); "modified" shifts to the
budget-corrected ranks floor((B+1) alpha/2) and
ceil((B+1)(1-alpha)) + floor((B+1) alpha/2), which are honest at any
fixed B; "randomized" draws one uniform to mix the ceil/floor upper
rank so the miscoverage bias cancels exactly.  Membership is always
the half-open bracket [W_(l), W_(u)) on the resample scale.

Tests (permutation, randomization) compare the observed statistic
against an order statistic of the B resampled statistics with >= as
the rejection comparison; ties with the threshold are flagged.

Seed plumbing: a procedure call with budget B consumes stream ids
seed.stream_id + 0 .. + B (one per resample, plus one for the
randomized branch draw), so callers should space replicate seeds via
:func:`fixedb.resampling.stream_for`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import BudgetTooSmall, InvalidInput, NumericalFailure
from .orderstats import (
    BudgetSpec,
    IntervalIndexRule,
    SortedSample,
    index_rule,
    min_budget,
    order_stat,
    sorted_from,
    tau_randomization,
)
from .resampling import (
    PermutationGroup,
    SeedSpec,
    SgdSpec,
    bootstrap_indices,
    generator,
    permutation_draw,
    sgd_paths,
    signflip_transform,
    subsample_indices,
)

__all__ = [
    "Interval",
    "RandomizedBranch",
    "CiResult",
    "TestDecision",
    "PredictionSet",
    "ci_boot",
    "ci_subsample",
    "ci_sgd",
    "permutation_test",
    "randomization_test",
    "conformal_set",
]

_CI_VARIANTS = ("vanilla", "modified", "randomized")


def _child(seed: SeedSpec, offset: int) -> SeedSpec:
    return SeedSpec(seed.master_seed, seed.stream_id + offset)


@dataclass(frozen=True)
class Interval:
    """A scalar interval with explicit endpoint openness."""

    lo: float
    hi: float
    lo_open: bool = True
    hi_closed: bool = True

    def contains(self, x: float) -> bool:
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return bool(above and below)

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class RandomizedBranch:
    """Record of the randomized upper-rank draw: took the ceil branch
    iff u <= tau."""

    u: float
    tau: float
    took_ceil: bool


@dataclass(frozen=True)
class CiResult:
    """A confidence set for one (scalar or vector) parameter.

    ``contains`` tests candidate parameters directly.  ``interval`` is
    populated only when the root is the scalar identity, in which case
    contains(theta) and interval.contains(theta) agree everywhere.
    ``span`` is the resample-scale threshold spread (W_(u) - W_(l))
    divided by the rate, which equals the interval width in the scalar
    case and is the reported width proxy otherwise.
    """

    contains: Callable[[object], bool]
    rule: IntervalIndexRule
    resample_stats: SortedSample
    budget: BudgetSpec
    span: float
    interval: Optional[Interval] = None
    randomized_branch: Optional[RandomizedBranch] = None


@dataclass(frozen=True)
class TestDecision:
    """Outcome of a resampling test; reject iff statistic >= threshold.

    ``tie`` marks an exact tie between statistic and threshold, where
    the >= comparison breaks toward rejection.
    """

    reject: bool
    statistic: float
    threshold: float
    rule: IntervalIndexRule
    budget: BudgetSpec
    tie: bool = False


@dataclass(frozen=True)
class PredictionSet:
    """A conformal set {y: score(y) <= threshold}."""

    threshold: float
    rule: IntervalIndexRule
    calibration: SortedSample

    def contains_score(self, score: float) -> bool:
        return bool(score <= self.threshold)


def _pick_rule(budget: BudgetSpec, variant: str, u_seed: SeedSpec):
    """Index rule plus branch record for a CI variant."""
    if variant not in _CI_VARIANTS:
        raise InvalidInput(f"variant must be one of {_CI_VARIANTS}, got {variant!r}")
    if variant == "vanilla":
        return index_rule(budget, "vanilla_two_sided"), None
    need = min_budget(budget.alpha, "two")
    if budget.B < need:
        raise BudgetTooSmall(
            f"{variant} two-sided interval needs B >= {need} at alpha={budget.alpha}",
            min_b=need,
        )
    if variant == "modified":
        return index_rule(budget, "mod_two_sided"), None
    tau = tau_randomization(budget)
    u = float(generator(u_seed).random())
    took_ceil = u <= tau
    name = "mod_two_sided" if took_ceil else "mod_two_sided_floor"
    return index_rule(budget, name), RandomizedBranch(u=u, tau=tau, took_ceil=took_ceil)


def _resample_roots(
    data: np.ndarray,
    estimator: Callable,
    root: Optional[Callable],
    rate: float,
    theta_hat,
    draw_indices: Callable[[int], np.ndarray],
    B: int,
) -> np.ndarray:
    ws = np.empty(B)
    for b in range(1, B + 1):
        idx = draw_indices(b)
        try:
            theta_star = estimator(data[idx])
        except Exception as exc:
            raise NumericalFailure(f"estimator failed on resample {b}: {exc}", step=b) from exc
        diff = np.asarray(theta_star, dtype=float) - theta_hat
        w = rate * diff if root is None else root(rate * diff)
        w = float(w)
        if not math.isfinite(w):
            raise NumericalFailure(f"non-finite resample root on resample {b}", step=b)
        ws[b - 1] = w
    return ws


def _assemble_ci(
    theta_hat,
    ws: np.ndarray,
    tau_m: float,
    budget: BudgetSpec,
    rule: IntervalIndexRule,
    branch: Optional[RandomizedBranch],
    root: Optional[Callable],
) -> CiResult:
    stats = sorted_from(ws)
    w_l = order_stat(stats, rule.lower_rank)
    w_u = order_stat(stats, rule.upper_rank)
    span = (w_u - w_l) / tau_m
    if root is None:
        center = float(theta_hat)
        interval = Interval(lo=center - w_u / tau_m, hi=center - w_l / tau_m)
        return CiResult(
            contains=interval.contains,
            rule=rule,
            resample_stats=stats,
            budget=budget,
            span=span,
            interval=interval,
            randomized_branch=branch,
        )

    def contains(theta) -> bool:
        s = float(root(tau_m * (theta_hat - np.asarray(theta, dtype=float))))
        return bool(w_l <= s < w_u)

    return CiResult(
        contains=contains,
        rule=rule,
        resample_stats=stats,
        budget=budget,
        span=span,
        randomized_branch=branch,
    )


def ci_boot(
    data,
    estimator: Callable,
    root: Optional[Callable] = None,
    tau_m: float = 1.0,
    B: int = 19,
    alpha: float = 0.1,
    variant: str = "modified",
    seed: SeedSpec = SeedSpec(0),
) -> CiResult:
    """Bootstrap confidence set from B with-replacement resamples.

    The resample roots are W_b = root(tau_m (theta*_b - theta_hat))
    and membership is root(tau_m (theta_hat - theta)) in
    [W_(l), W_(u)) under the variant's rank rule.  ``root`` None means
    the scalar identity, which also populates ``interval``.
    """
    data = np.asarray(data)
    if len(data) < 1:
        raise InvalidInput("data must be nonempty")
    budget = BudgetSpec(B=B, alpha=alpha)
    rule, branch = _pick_rule(budget, variant, _child(seed, B))
    theta_hat = np.asarray(estimator(data), dtype=float)
    m = len(data)
    ws = _resample_roots(
        data,
        estimator,
        root,
        tau_m,
        theta_hat,
        lambda b: bootstrap_indices(m, _child(seed, b - 1)),
        B,
    )
    return _assemble_ci(theta_hat, ws, tau_m, budget, rule, branch, root)


def ci_subsample(
    data,
    estimator: Callable,
    root: Optional[Callable] = None,
    tau_m: float = 1.0,
    tau_k: float = 1.0,
    k: int = 1,
    B: int = 19,
    alpha: float = 0.1,
    variant: str = "modified",
    seed: SeedSpec = SeedSpec(0),
) -> CiResult:
    """Subsampling confidence set from B without-replacement size-k draws.

    Resample roots use the subsample rate: W_b =
    root(tau_k (theta*_{k,b} - theta_hat)); membership tests
    root(tau_m (theta_hat - theta)) in [W_(l), W_(u)).
    """
    data = np.asarray(data)
    if len(data) < 1:
        raise InvalidInput("data must be nonempty")
    m = len(data)
    if not 1 <= k <= m:
        raise InvalidInput(f"need 1 <= k <= m, got k={k}, m={m}")
    budget = BudgetSpec(B=B, alpha=alpha)
    rule, branch = _pick_rule(budget, variant, _child(seed, B))
    theta_hat = np.asarray(estimator(data), dtype=float)
    ws = _resample_roots(
        data,
        estimator,
        root,
        tau_k,
        theta_hat,
        lambda b: subsample_indices(m, k, _child(seed, b - 1)),
        B,
    )
    return _assemble_ci(theta_hat, ws, tau_m, budget, rule, branch, root)


def ci_sgd(
    stream,
    spec: SgdSpec,
    B: int = 19,
    alpha: float = 0.1,
    variant: str = "modified",
    seed: SeedSpec = SeedSpec(0),
    theta0=None,
    gradient_batch: Optional[Callable] = None,
) -> list:
    """Per-coordinate confidence intervals from multiplier-SGD paths.

    Runs one unweighted averaged path theta_bar and B weighted paths
    theta_bar*_b over the same stream (the weights are the only per-b
    randomness), then inverts per coordinate j:
    (2 theta_bar_j - W_(u), 2 theta_bar_j - W_(l)] with W the sorted
    b-th coordinates.  Returns one CiResult per coordinate.
    """
    budget = BudgetSpec(B=B, alpha=alpha)
    rule, branch = _pick_rule(budget, variant, _child(seed, B))
    if theta0 is None:
        theta0 = np.zeros(spec.dim)
    seeds = [None] + [_child(seed, b - 1) for b in range(1, B + 1)]
    paths = sgd_paths(spec, stream, theta0, seeds, gradient_batch=gradient_batch)
    theta_bar, stars = paths[0], paths[1:]
    results = []
    for j in range(spec.dim):
        stats = sorted_from(stars[:, j])
        w_l = order_stat(stats, rule.lower_rank)
        w_u = order_stat(stats, rule.upper_rank)
        interval = Interval(lo=2.0 * theta_bar[j] - w_u, hi=2.0 * theta_bar[j] - w_l)
        results.append(
            CiResult(
                contains=interval.contains,
                rule=rule,
                resample_stats=stats,
                budget=budget,
                span=interval.width,
                interval=interval,
                randomized_branch=branch,
            )
        )
    return results


def permutation_test(
    data,
    statistic: Callable,
    G: PermutationGroup,
    B: int,
    alpha: float,
    seed: SeedSpec = SeedSpec(0),
) -> TestDecision:
    """Fixed-budget permutation test, drawing with replacement from G.

    ``statistic`` is called as statistic(data, perm); the observed
    value uses the identity permutation.  The threshold rank is
    ceil(B(1-alpha)) + 2 when B equals |G| and
    ceil((B+1)(1-alpha)) + 1 otherwise; a rank beyond B yields the
    +inf sentinel and the test never rejects.
    """
    budget = BudgetSpec(B=B, alpha=alpha)
    size = G.size
    if size is not None and B > size:
        raise InvalidInput(f"B={B} exceeds |G|={size}; draws come from G")
    name = "permutation_full" if size is not None and B == size else "permutation_sub"
    rule = index_rule(budget, name)
    t_obs = float(statistic(data, np.arange(G.m)))
    t_star = np.empty(B)
    for b in range(1, B + 1):
        t_star[b - 1] = statistic(data, permutation_draw(G, _child(seed, b - 1)))
    stats = sorted_from(t_star)
    threshold = order_stat(stats, rule.upper_rank)
    reject = bool(t_obs >= threshold)
    return TestDecision(
        reject=reject,
        statistic=t_obs,
        threshold=threshold,
        rule=rule,
        budget=budget,
        tie=bool(t_obs == threshold),
    )


def randomization_test(
    data,
    statistic: Callable,
    group: Union[str, Sequence[Callable]] = "signflip",
    B: int = 19,
    alpha: float = 0.1,
    center: float = 0.0,
    seed: SeedSpec = SeedSpec(0),
) -> TestDecision:
    """Randomization test from B uniformly drawn transforms.

    ``group`` is "signflip" (IID sign flips of the centered data) or an
    explicit sequence of callables data -> data.  ``center`` is
    subtracted from the data first, so a point null about the mean
    becomes symmetry about zero.  Threshold rank is
    ceil((B+1)(1-alpha)); reject iff statistic(data) >= threshold.
    """
    budget = BudgetSpec(B=B, alpha=alpha)
    rule = index_rule(budget, "randomization")
    x = np.asarray(data, dtype=float) - center
    t_obs = float(statistic(x))
    t_star = np.empty(B)
    if group == "signflip":
        for b in range(1, B + 1):
            t_star[b - 1] = statistic(signflip_transform(x, _child(seed, b - 1)))
    else:
        transforms = list(group)
        if len(transforms) == 0:
            raise InvalidInput("explicit transform list must be nonempty")
        for b in range(1, B + 1):
            gen = generator(_child(seed, b - 1))
            g = transforms[int(gen.integers(0, len(transforms)))]
            t_star[b - 1] = statistic(g(x))
    stats = sorted_from(t_star)
    threshold = order_stat(stats, rule.upper_rank)
    return TestDecision(
        reject=bool(t_obs >= threshold),
        statistic=t_obs,
        threshold=threshold,
        rule=rule,
        budget=budget,
        tie=bool(t_obs == threshold),
    )


def conformal_set(calib_scores, alpha: float, variant: str = "split") -> PredictionSet:
    """Conformal prediction set from m calibration scores.

    "split" thresholds at rank ceil((m+1)(1-alpha)) with a +inf
    sentinel when the rank exceeds m; "modified" uses the
    budget-corrected rank m + 1 - floor(2 m alpha / 3).
    """
    scores = np.asarray(calib_scores, dtype=float)
    if scores.ndim != 1 or scores.size < 1:
        raise InvalidInput("calib_scores must be a nonempty 1-d vector")
    if variant not in ("split", "modified"):
        raise InvalidInput(f"variant must be 'split' or 'modified', got {variant!r}")
    budget = BudgetSpec(B=scores.size, alpha=alpha)
    name = "conformal_split" if variant == "split" else "conformal_mod"
    rule = index_rule(budget, name)
    stats = sorted_from(scores, support_hi=math.inf)
    threshold = order_stat(stats, rule.upper_rank)
    return PredictionSet(threshold=threshold, rule=rule, calibration=stats)
