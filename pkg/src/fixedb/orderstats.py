"""Order-statistic bookkeeping for fixed-budget resampling inference.

Everything downstream works with the sorted resample statistics
W_(1) <= ... <= W_(B) plus two support sentinels: the rank-r order
statistic resolves to the support minimum for r <= 0 and to the support
maximum for r >= B + 1.  This module owns that convention, every rank
rule used by the confidence-interval and test procedures, the minimum
budgets at which two- and one-sided rules stay informative, and the
external-randomization probability that makes the randomized two-sided
rule exact on average.

Rank arithmetic is exact: the level ``alpha`` is snapped to the nearest
rational with denominator at most 10**6 before any floor or ceiling is
taken, so floating-point noise can never flip an index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetTooSmall, InvalidInput

__all__ = [
    "SortedSample",
    "IntervalIndexRule",
    "BudgetSpec",
    "RULE_NAMES",
    "sorted_from",
    "order_stat",
    "index_rule",
    "min_budget",
    "tau_randomization",
]

#: Largest denominator kept when snapping alpha to a rational.
ALPHA_DENOMINATOR_CAP = 10**6

#: Interval kinds understood by the index rules and coverage bounds.
KINDS = ("closed", "left_closed_right_open", "left_open_right_closed", "one_sided_upper")

#: Every named rank rule.  See :func:`index_rule`.
RULE_NAMES = (
    "vanilla_two_sided",
    "mod_two_sided",
    "mod_two_sided_floor",
    "one_sided_upper_mod",
    "permutation_full",
    "permutation_sub",
    "randomization",
    "conformal_split",
    "conformal_mod",
    "ordering_symmetric",
    "dependent_two_sided",
)


@dataclass(frozen=True)
class SortedSample:
    """A nondecreasing vector of resample statistics with support sentinels.

    Parameters
    ----------
    values : np.ndarray
        Sorted statistics W_(1) <= ... <= W_(B).
    support_lo, support_hi : float
        Values returned for out-of-range ranks; default to -inf / +inf,
        and may be finite when the statistic's support is known (e.g. 0
        for non-negative conformity scores).
    """

    values: np.ndarray
    support_lo: float = -math.inf
    support_hi: float = math.inf

    @property
    def b(self) -> int:
        """The budget B (number of stored statistics)."""
        return int(self.values.shape[0])


@dataclass(frozen=True)
class IntervalIndexRule:
    """A resolved rank pair plus the interval kind that goes with it.

    ``lower_rank`` may be 0 and ``upper_rank`` may be B + 1; those ranks
    resolve through the support sentinels of the sample they are applied
    to.  For one-sided rules only ``upper_rank`` is meaningful and
    ``lower_rank`` is fixed at 0.
    """

    lower_rank: int
    upper_rank: int
    kind: str
    rule_name: str


@dataclass(frozen=True)
class BudgetSpec:
    """A Monte Carlo budget B and a miscoverage level alpha."""

    B: int
    alpha: float

    def __post_init__(self):
        if int(self.B) != self.B or self.B < 1:
            raise InvalidInput(f"budget B must be an integer >= 1, got {self.B!r}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidInput(f"alpha must lie in (0, 1), got {self.alpha!r}")


def _snap_alpha(alpha: float) -> Fraction:
    """Snap alpha to the nearest rational with a bounded denominator."""
    if not 0.0 < alpha < 1.0:
        raise InvalidInput(f"alpha must lie in (0, 1), got {alpha!r}")
    return Fraction(alpha).limit_denominator(ALPHA_DENOMINATOR_CAP)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def sorted_from(
    values,
    support_lo: float = -math.inf,
    support_hi: float = math.inf,
) -> SortedSample:
    """Sort raw resample statistics into a :class:`SortedSample`.

    Ties are kept as-is (stable sort, no jittering); the input is not
    modified.  Raises :class:`InvalidInput` on empty input, NaN, or a
    non-finite statistic, and when a finite sentinel does not actually
    bound the sample.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput("sample must be a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("sample values must all be finite")
    out = np.sort(arr, kind="stable")
    if support_lo > out[0] or support_hi < out[-1]:
        raise InvalidInput(
            f"support sentinels [{support_lo}, {support_hi}] do not bound the sample"
        )
    return SortedSample(values=out, support_lo=float(support_lo), support_hi=float(support_hi))


def order_stat(s: SortedSample, r: int) -> float:
    """The rank-r order statistic with the sentinel convention.

    Returns ``values[r-1]`` for 1 <= r <= B, ``support_lo`` for r <= 0
    and ``support_hi`` for r >= B + 1.
    """
    if r <= 0:
        return s.support_lo
    if r >= s.b + 1:
        return s.support_hi
    return float(s.values[r - 1])


def min_budget(alpha: float, sided: str = "two") -> int:
    """Smallest budget with an informative interval at level alpha.

    ``ceil(1/alpha - 1)`` for one-sided rules and ``ceil(2/alpha - 1)``
    for two-sided ones.
    """
    a = _snap_alpha(alpha)
    if sided == "one":
        return _ceil(1 / a - 1)
    if sided == "two":
        return _ceil(2 / a - 1)
    raise InvalidInput(f"sided must be 'one' or 'two', got {sided!r}")


def _tau_fraction(B: int, alpha: Fraction) -> Fraction:
    """Exact randomization probability for the two-sided rule.

    Equals 1 when (B+1)(1-alpha) is an integer, else the fractional part
    of (B+1)(1-alpha).  Chosen so that
    ``tau * ceil((B+1)(1-alpha))/(B+1) + (1-tau) * floor(...)/(B+1)``
    equals 1 - alpha exactly.
    """
    t = (B + 1) * (1 - alpha)
    fl, ce = _floor(t), _ceil(t)
    if fl == ce:
        return Fraction(1)
    return ((1 - alpha) - Fraction(fl, B + 1)) / Fraction(ce - fl, B + 1)


def tau_randomization(spec: BudgetSpec) -> float:
    """Probability of taking the ceiling branch in the randomized rule.

    A fractional part within 1e-9 of an integer counts as the integer
    case (returns exactly 1.0); the snap to rational alpha makes the
    check exact for every level a user can realistically type.
    """
    a = _snap_alpha(spec.alpha)
    t = (spec.B + 1) * (1 - a)
    frac_part = t - _floor(t)
    if min(float(frac_part), 1.0 - float(frac_part)) <= 1e-9:
        return 1.0
    return float(_tau_fraction(spec.B, a))


def _clamp(lower: int, upper: int, B: int) -> tuple[int, int]:
    return max(0, lower), min(B + 1, upper)


def index_rule(
    spec: BudgetSpec,
    rule_name: str,
    *,
    gamma: float | None = None,
    beta: float | None = None,
) -> IntervalIndexRule:
    """Resolve a named rank rule to explicit integer ranks.

    Parameters
    ----------
    spec : BudgetSpec
        Budget and level.  For the conformal rules B plays the role of
        the calibration-set size m.
    rule_name : str
        One of :data:`RULE_NAMES`.
    gamma, beta : float, optional
        Tail splits for ``dependent_two_sided``; both default to alpha.

    Raises
    ------
    BudgetTooSmall
        When the rule degenerates at this budget: the interval would be
        empty or span the full support (two-sided rules), or the
        threshold rank would exceed B (``randomization`` and
        ``one_sided_upper_mod``, whose callers need an informative
        threshold).  The permutation and conformal rules instead keep
        the out-of-range rank and resolve it through the support-max
        sentinel (never reject / infinite threshold).
    """
    B = spec.B
    a = _snap_alpha(spec.alpha)
    one = Fraction(1)

    if rule_name == "vanilla_two_sided":
        lower = _ceil(B * a / 2)
        upper = _ceil(B * (one - a / 2))
        kind = "left_closed_right_open"
    elif rule_name in ("mod_two_sided", "mod_two_sided_floor"):
        lower = _floor((B + 1) * a / 2)
        body = (B + 1) * (one - a)
        upper = (_ceil(body) if rule_name == "mod_two_sided" else _floor(body)) + lower
        kind = "left_closed_right_open"
    elif rule_name in ("one_sided_upper_mod", "randomization", "conformal_split"):
        lower = 0
        upper = _ceil((B + 1) * (one - a))
        kind = "one_sided_upper"
    elif rule_name == "permutation_full":
        lower = 0
        upper = _ceil(B * (one - a)) + 2
        kind = "one_sided_upper"
    elif rule_name == "permutation_sub":
        lower = 0
        upper = _ceil((B + 1) * (one - a)) + 1
        kind = "one_sided_upper"
    elif rule_name == "conformal_mod":
        lower = 0
        upper = B + 1 - _floor(2 * B * a / 3)
        kind = "one_sided_upper"
    elif rule_name == "ordering_symmetric":
        half = _floor(B * a / 3 - Fraction(1, 2))
        lower = half
        upper = B - half
        kind = "closed"
        if half < 0:
            raise BudgetTooSmall(
                f"ordering_symmetric needs B >= 3/(2 alpha); got B={B}",
                min_b=_ceil(Fraction(3, 2) / a),
            )
    elif rule_name == "dependent_two_sided":
        g = _snap_alpha(spec.alpha if gamma is None else gamma)
        bta = _snap_alpha(spec.alpha if beta is None else beta)
        lower = _floor((B + 1) * g / 2) - 1
        upper = _ceil((B + 1) * (one - bta / 2))
        kind = "closed"
        lower, upper = _clamp(lower, upper, B)
        if lower <= 0 and upper >= B + 1:
            raise BudgetTooSmall(
                f"dependent_two_sided covers the full support at B={B}",
                min_b=int(min(_ceil(4 / g - 1), _ceil(2 / bta - 1))),
            )
        return IntervalIndexRule(lower, upper, kind, rule_name)
    else:
        raise InvalidInput(f"unknown rule name {rule_name!r}")

    lower, upper = _clamp(lower, upper, B)

    if lower >= upper:
        raise BudgetTooSmall(
            f"rule {rule_name} yields an empty interval at B={B}, alpha={spec.alpha}",
            min_b=min_budget(spec.alpha, "two"),
        )
    if kind == "one_sided_upper":
        if rule_name in ("one_sided_upper_mod", "randomization") and upper >= B + 1:
            raise BudgetTooSmall(
                f"rule {rule_name} needs B >= ceil(1/alpha - 1); got B={B}",
                min_b=min_budget(spec.alpha, "one"),
            )
    elif lower <= 0 and upper >= B + 1:
        raise BudgetTooSmall(
            f"rule {rule_name} covers the full support at B={B}, alpha={spec.alpha}",
            min_b=min_budget(spec.alpha, "one"),
        )
    return IntervalIndexRule(lower, upper, kind, rule_name)
