"""Closed-form coverage brackets for order-statistic intervals.

Every function takes a budget, a rank pair, and the relevant slack
inputs, and returns how much coverage the interval
[W_(a), W_(B-b)] (in one of its three open/closed variants) is
guaranteed to have.  The ideal "base" term is 1 - (a+b+1)/(B+1); the
interval kind decides whether the unavoidable 1/(B+1) discretization
term lands on the upper bound, and the distribution slacks widen the
bracket symmetrically.

Slack inputs are caller-supplied: exactly computable for finite
discrete instances (see :mod:`fixedb.oracle`), analytic or asymptotic
otherwise.  Outputs are clamped to [0, 1]; when clamping fires it is
recorded in ``slack_terms`` so tests can tell a vacuous bound from a
sharp one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .discrete import i_b
from .errors import InvalidIndices, InvalidInput

__all__ = [
    "CoverageBound",
    "iid_bracket",
    "ks_slack_tail",
    "ks_slack_markov",
    "independent_bracket",
    "ordering_lower",
    "dependent_bracket",
]


@dataclass(frozen=True)
class CoverageBound:
    """A (lower, upper) coverage bracket with an itemized breakdown.

    ``upper`` may be ``math.inf`` when the theory provides no upper
    bound.  ``slack_terms`` lists (name, value) pairs: the base term,
    each distribution slack, the 1/(B+1) budget term when present, and
    any clamping that was applied.
    """

    lower: float
    upper: float
    base: float
    slack_terms: tuple = field(default_factory=tuple)


def _check_indices(B: int, a: int, b: int) -> None:
    if not (0 <= a < B - b <= B):
        raise InvalidIndices(f"need 0 <= a < B - b <= B, got a={a}, b={b}, B={B}")


def _clamped(lo: float, hi: float, base: float, terms: list) -> CoverageBound:
    if lo < 0.0:
        terms.append(("clamp_lower", -lo))
        lo = 0.0
    if hi != math.inf and hi > 1.0:
        terms.append(("clamp_upper", hi - 1.0))
        hi = 1.0
    lo = min(lo, 1.0)
    return CoverageBound(lower=lo, upper=hi, base=base, slack_terms=tuple(terms))


def iid_bracket(
    B: int,
    a: int,
    b: int,
    *,
    delta: float = 0.0,
    delta_tilde: float = 0.0,
    kind: str = "closed",
) -> CoverageBound:
    """Coverage bracket when the resamples are conditionally IID.

    ``delta`` is the interval-KS distance between the law of the
    conditional CDF evaluated at the target and U(0, 1); ``delta_tilde``
    the same with the strict-inequality CDF.  The three kinds bracket,
    with base = 1 - (a+b+1)/(B+1):

    * closed                 [W_(a), W_(B-b)] : [base - d, base + 1/(B+1) + d]
    * left_closed_right_open [W_(a), W_(B-b)) : [base - d, base + d]
    * left_open_right_closed (W_(a), W_(B-b)] : [base - d~, base + d~]
    """
    _check_indices(B, a, b)
    if delta < 0.0 or delta_tilde < 0.0:
        raise InvalidInput("slack inputs must be nonnegative")
    base = 1.0 - (a + b + 1) / (B + 1)
    if kind == "closed":
        terms = [("base", base), ("delta", delta), ("budget", 1.0 / (B + 1))]
        return _clamped(base - delta, base + 1.0 / (B + 1) + delta, base, terms)
    if kind == "left_closed_right_open":
        terms = [("base", base), ("delta", delta)]
        return _clamped(base - delta, base + delta, base, terms)
    if kind == "left_open_right_closed":
        terms = [("base", base), ("delta_tilde", delta_tilde)]
        return _clamped(base - delta_tilde, base + delta_tilde, base, terms)
    raise InvalidInput(f"unknown interval kind {kind!r}")


def ks_slack_tail(eps: float, p_exceed: float, eta: float = 0.0) -> float:
    """Upper bound on the KS slack from a tail split.

    If the resampling distribution tracks the target to within ``eps``
    except on an event of probability ``p_exceed``, and the target's
    atoms carry at most ``eta`` mass, the KS distance between the
    conditional-CDF law and U(0, 1) is at most eps + p_exceed + eta.
    """
    if eps <= 0.0:
        raise InvalidInput("eps must be positive")
    if not 0.0 <= p_exceed <= 1.0:
        raise InvalidInput("p_exceed must lie in [0, 1]")
    return min(1.0, eps + p_exceed + eta)


def ks_slack_markov(p: float, lp_norm: float, eta: float = 0.0) -> float:
    """The tail split optimized via Markov's inequality.

    (p+1) (lp_norm / p)^{p/(p+1)} + eta, where ``lp_norm`` is the L^p
    norm of the consistency discrepancy; clamped to [0, 1].
    """
    if p < 1.0:
        raise InvalidInput("p must be >= 1")
    if lp_norm < 0.0:
        raise InvalidInput("lp_norm must be nonnegative")
    if lp_norm == 0.0:
        return min(1.0, eta)
    return min(1.0, (p + 1.0) * (lp_norm / p) ** (p / (p + 1.0)) + eta)


def independent_bracket(B: int, a: int, b: int, d_tilde: float, kappas) -> CoverageBound:
    """Coverage bracket for conditionally independent, non-identical
    resamples and the closed interval [W_(a), W_(B-b)].

    ``d_tilde`` is the interval-KS distance between the law of the
    averaged conditional CDF at the target and U(0, 1); ``kappas`` are
    the per-resample sup-distances from the target's CDF.  The combined
    slack is d~ + (sum kappa_i^2) (I_B + d~), and the bracket is
    [base - slack, base + slack + 1/(B+1)].
    """
    _check_indices(B, a, b)
    kappas = list(kappas)
    if len(kappas) != B:
        raise InvalidInput(f"need exactly B={B} kappa values, got {len(kappas)}")
    if d_tilde < 0.0 or any(not 0.0 <= k <= 1.0 for k in kappas):
        raise InvalidInput("slacks must be nonnegative and kappas in [0, 1]")
    base = 1.0 - (a + b + 1) / (B + 1)
    kap_sq = math.fsum(k * k for k in kappas)
    slack = d_tilde + kap_sq * (i_b(B) + d_tilde)
    terms = [
        ("base", base),
        ("d_tilde", d_tilde),
        ("kappa_sq_times_ib", kap_sq * (i_b(B) + d_tilde)),
        ("budget", 1.0 / (B + 1)),
    ]
    return _clamped(base - slack, base + slack + 1.0 / (B + 1), base, terms)


def ordering_lower(B: int, a: int, b: int, d_ks: float) -> float:
    """Lower coverage bound via the Hoeffding tail ordering, for
    conditionally independent resamples and the closed interval.

    1 - 3(a+b+1)/(2B) - 6 d_ks, clamped below at 0; ``d_ks`` is the KS
    distance between the law of the averaged conditional CDF at the
    target and U(0, 1).
    """
    _check_indices(B, a, b)
    if d_ks < 0.0:
        raise InvalidInput("d_ks must be nonnegative")
    return max(0.0, 1.0 - 3.0 * (a + b + 1) / (2.0 * B) - 6.0 * d_ks)


def dependent_bracket(
    B: int,
    gamma: float,
    beta: float,
    gap: float,
    continuous: bool = False,
) -> CoverageBound:
    """Coverage bracket under arbitrary dependence.

    For the closed interval with ranks floor((B+1) gamma/2) - 1 and
    ceil((B+1)(1 - beta/2)), coverage is at least
    1 - (gamma+beta)/2 - gap where ``gap`` is the exchangeability gap of
    the joint law (see :func:`fixedb.distances.gamma_exact`).  The
    matching upper bound 1 - (gamma+beta)/2 + gap + 4/(B+1) requires the
    marginals to be continuous; without ``continuous`` the upper bound
    is +inf.
    """
    if not (0.0 < gamma < 1.0 and 0.0 < beta < 1.0):
        raise InvalidInput("gamma and beta must lie in (0, 1)")
    if gap < 0.0:
        raise InvalidInput("gap must be nonnegative")
    base = 1.0 - (gamma + beta) / 2.0
    terms = [("base", base), ("gamma_gap", gap)]
    if continuous:
        terms.append(("budget", 4.0 / (B + 1)))
        return _clamped(base - gap, base + gap + 4.0 / (B + 1), base, terms)
    bound = _clamped(base - gap, math.inf, base, terms)
    return bound
