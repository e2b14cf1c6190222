"""Brute-force ground truth for the coverage guarantees.

Everything here is computed by exhaustive enumeration or closed-form
rank identities, never by Monte Carlo, so the bounds in
:mod:`fixedb.bounds` can be validated exactly on finite instances:

* finite discrete joints of (W_1..W_B, psi(Z)) with exact coverage of
  any order-statistic interval (:func:`exact_coverage_discrete`);
* conditionally IID and conditionally independent instances with their
  exact slack inputs (interval-KS distances, kappa discrepancies)
  computed straight from the conditional pmfs;
* the continuous-IID rank identity (:func:`exact_coverage_continuous_iid`);
* the deterministic conformal calibration grid
  (:func:`conformal_grid_example`);
* exhaustive sweeps used by the verification gate: randomized-instance
  bracket checks, the heterogeneous-Bernoulli TV bound and tail
  ordering over a full probability grid, and the conformal grid bound
  over a range of calibration sizes.

Interval membership is reduced to the pair (n_lt, n_le) = (number of
W_i strictly below psi, number weakly below): for the interval with
lower rank a and upper rank B-b,

* closed                 iff n_le >= a and n_lt <= B-b-1,
* left-closed right-open iff a <= n_le <= B-b-1,
* left-open right-closed iff a <= n_lt <= B-b-1,

so one enumeration yields a (B+1) x (B+1) joint mass matrix of the
pair from which every (a, b, kind) coverage is read off.  Rank 0 and
rank B+1 act as -inf/+inf sentinels (no constraint on that side).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bounds import dependent_bracket, iid_bracket, independent_bracket, ordering_lower
from .discrete import binom_pmf, poisson_binomial_pmf_batch
from .distances import ENUMERATION_CAP, FinitePmf, gamma_exact
from .errors import BudgetTooSmall, CapacityExceeded, InvalidIndices, InvalidInput
from .orderstats import ALPHA_DENOMINATOR_CAP, BudgetSpec, index_rule

__all__ = [
    "CondIIDInstance",
    "CondIndepInstance",
    "GridExample",
    "SweepReport",
    "dist_to_uniform",
    "iid_slacks",
    "indep_slacks",
    "exact_coverage_discrete",
    "exact_coverage_continuous_iid",
    "conformal_grid_example",
    "conformal_grid_sweep",
    "random_cond_iid",
    "random_cond_indep",
    "random_joint",
    "check_cond_iid",
    "check_cond_indep",
    "check_dependent",
    "bracket_suite",
    "ehm_hoeffding_sweep",
]

_TWO_SIDED_KINDS = ("closed", "left_closed_right_open", "left_open_right_closed")
_TOL = 1e-9


@dataclass(frozen=True)
class SweepReport:
    """Outcome of an exhaustive verification sweep."""

    n_checked: int
    violations: tuple
    note: str = ""

    @property
    def passed(self) -> bool:
        return len(self.violations) == 0


def _check_prob_vector(p, what: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidInput(f"{what} must be a non-empty 1-d vector")
    if np.any(p < -1e-12) or abs(float(p.sum()) - 1.0) > 1e-9:
        raise InvalidInput(f"{what} must be a probability vector")
    return np.clip(p, 0.0, None)


@dataclass(frozen=True)
class CondIIDInstance:
    """A finite conditionally-IID instance.

    Z takes len(z_probs) values; psi_vals[j] is psi(z_j); given Z=z_j
    every W_i is an independent draw from the pmf ``w_cond[j]`` on the
    shared, strictly increasing atom grid ``w_atoms``.
    """

    z_probs: tuple
    psi_vals: tuple
    w_atoms: tuple
    w_cond: tuple

    def __post_init__(self) -> None:
        _check_prob_vector(self.z_probs, "z_probs")
        if not len(self.z_probs) == len(self.psi_vals) == len(self.w_cond):
            raise InvalidInput("z_probs, psi_vals and w_cond must align")
        atoms = np.asarray(self.w_atoms, dtype=float)
        if atoms.ndim != 1 or atoms.size == 0 or np.any(np.diff(atoms) <= 0):
            raise InvalidInput("w_atoms must be strictly increasing")
        for row in self.w_cond:
            if len(row) != atoms.size:
                raise InvalidInput("each conditional pmf row must match w_atoms")
            _check_prob_vector(row, "w_cond row")
        if not all(math.isfinite(v) for v in self.psi_vals):
            raise InvalidInput("psi values must be finite")


@dataclass(frozen=True)
class CondIndepInstance:
    """Conditionally independent, non-identical resamples.

    ``w_cond[i][j]`` is the pmf of W_{i+1} given Z = z_j on the shared
    grid ``w_atoms``; the number of resamples B is len(w_cond).
    """

    z_probs: tuple
    psi_vals: tuple
    w_atoms: tuple
    w_cond: tuple

    def __post_init__(self) -> None:
        _check_prob_vector(self.z_probs, "z_probs")
        if len(self.z_probs) != len(self.psi_vals):
            raise InvalidInput("z_probs and psi_vals must align")
        atoms = np.asarray(self.w_atoms, dtype=float)
        if atoms.ndim != 1 or atoms.size == 0 or np.any(np.diff(atoms) <= 0):
            raise InvalidInput("w_atoms must be strictly increasing")
        if len(self.w_cond) == 0:
            raise InvalidInput("need at least one resample coordinate")
        for per_i in self.w_cond:
            if len(per_i) != len(self.z_probs):
                raise InvalidInput("each coordinate needs one pmf row per z atom")
            for row in per_i:
                if len(row) != atoms.size:
                    raise InvalidInput("each conditional pmf row must match w_atoms")
                _check_prob_vector(row, "w_cond row")

    @property
    def b(self) -> int:
        return len(self.w_cond)


def dist_to_uniform(values, probs) -> tuple[float, float]:
    """Exact (KS, interval-KS) distances of a discrete law on [0, 1]
    from the unit uniform.

    The supremum is a finite maximum over the jump points of the
    discrete CDF with both one-sided limits, so atoms at 0 and 1 are
    handled exactly.  Returns (d_ks, d_mod_ks).
    """
    v = np.asarray(values, dtype=float)
    p = _check_prob_vector(probs, "probs")
    if v.shape != p.shape:
        raise InvalidInput("values and probs must have equal length")
    if np.any(v < -1e-9) or np.any(v > 1.0 + 1e-9):
        raise InvalidInput("values must lie in [0, 1]")
    v = np.clip(v, 0.0, 1.0)
    uniq, inv = np.unique(v, return_inverse=True)
    mass = np.zeros(uniq.size)
    np.add.at(mass, inv, p)
    cum = np.cumsum(mass)
    cum_prev = cum - mass
    d_plus = max(0.0, float(np.max(cum - uniq)))
    d_minus = max(0.0, float(np.max(uniq - cum_prev)))
    return max(d_plus, d_minus), d_plus + d_minus


def iid_slacks(inst: CondIIDInstance) -> tuple[float, float]:
    """(delta, delta_tilde): exact interval-KS distances of the laws of
    F_0(Z) = P(W <= psi(Z) | Z) and its strict-inequality version from
    U(0, 1)."""
    atoms = np.asarray(inst.w_atoms)
    weak, strict = [], []
    for psi, row in zip(inst.psi_vals, inst.w_cond):
        row = np.asarray(row, dtype=float)
        weak.append(float(row[atoms <= psi].sum()))
        strict.append(float(row[atoms < psi].sum()))
    delta = dist_to_uniform(weak, inst.z_probs)[1]
    delta_tilde = dist_to_uniform(strict, inst.z_probs)[1]
    return delta, delta_tilde


def indep_slacks(inst: CondIndepInstance) -> tuple[float, float, list]:
    """(d_ks, d_tilde, kappas) for a conditionally independent instance.

    d_ks and d_tilde are the plain and interval KS distances of the law
    of the averaged conditional CDF at the target from U(0, 1); kappa_i
    is the sup over z of |F(psi(z)) - F_i(z)| with F the marginal CDF
    of psi(Z).
    """
    atoms = np.asarray(inst.w_atoms)
    psi = np.asarray(inst.psi_vals, dtype=float)
    z_p = np.asarray(inst.z_probs, dtype=float)
    B = inst.b
    f = np.empty((B, psi.size))
    for i, per_i in enumerate(inst.w_cond):
        for j, row in enumerate(per_i):
            f[i, j] = float(np.asarray(row, dtype=float)[atoms <= psi[j]].sum())
    fbar = f.mean(axis=0)
    d_ks, d_tilde = dist_to_uniform(fbar, z_p)
    marg = np.array([float(z_p[psi <= t].sum()) for t in psi])
    kappas = [float(np.max(np.abs(marg - f[i]))) for i in range(B)]
    return d_ks, d_tilde, kappas


@lru_cache(maxsize=32)
def _cartesian(n: int, B: int) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(n)] * B, indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, B)


def _accumulate_pairs(M: np.ndarray, w: np.ndarray, psi: float, pr: np.ndarray) -> None:
    n_lt = (w < psi).sum(axis=1)
    n_le = (w <= psi).sum(axis=1)
    np.add.at(M, (n_lt, n_le), pr)


def _pair_matrix_iid(inst: CondIIDInstance, B: int) -> np.ndarray:
    atoms = np.asarray(inst.w_atoms)
    if atoms.size**B * len(inst.z_probs) > ENUMERATION_CAP:
        raise CapacityExceeded("instance enumeration exceeds the atom budget")
    idx = _cartesian(atoms.size, B)
    w = atoms[idx]
    M = np.zeros((B + 1, B + 1))
    for pz, psi, row in zip(inst.z_probs, inst.psi_vals, inst.w_cond):
        pr = np.asarray(row, dtype=float)[idx].prod(axis=1) * pz
        _accumulate_pairs(M, w, psi, pr)
    return M


def _pair_matrix_indep(inst: CondIndepInstance) -> np.ndarray:
    atoms = np.asarray(inst.w_atoms)
    B = inst.b
    if atoms.size**B * len(inst.z_probs) > ENUMERATION_CAP:
        raise CapacityExceeded("instance enumeration exceeds the atom budget")
    idx = _cartesian(atoms.size, B)
    w = atoms[idx]
    M = np.zeros((B + 1, B + 1))
    for j, (pz, psi) in enumerate(zip(inst.z_probs, inst.psi_vals)):
        pr = np.full(idx.shape[0], float(pz))
        for i in range(B):
            pr *= np.asarray(inst.w_cond[i][j], dtype=float)[idx[:, i]]
        _accumulate_pairs(M, w, psi, pr)
    return M


def _pair_matrix_joint(joint: FinitePmf) -> tuple[np.ndarray, int]:
    first = joint.support[0]
    if not isinstance(first, tuple) or len(first) < 2:
        raise InvalidInput("joint atoms must be tuples (W_1..W_B, psi)")
    B = len(first) - 1
    if len(joint) > ENUMERATION_CAP:
        raise CapacityExceeded("joint support exceeds the atom budget")
    arr = np.asarray(joint.support, dtype=float)
    M = np.zeros((B + 1, B + 1))
    n_lt = (arr[:, :-1] < arr[:, -1:]).sum(axis=1)
    n_le = (arr[:, :-1] <= arr[:, -1:]).sum(axis=1)
    np.add.at(M, (n_lt, n_le), joint.probs)
    return M, B


def _coverage_from_matrix(M: np.ndarray, B: int, a: int, b: int, kind: str) -> float:
    if not (0 <= a <= B and -1 <= b and a < B - b <= B + 1):
        raise InvalidIndices(f"need 0 <= a < B - b <= B + 1, got a={a}, b={b}, B={B}")
    lt = np.arange(B + 1)[:, None]
    le = np.arange(B + 1)[None, :]
    hi = B - b - 1
    if kind == "closed":
        mask = (le >= a) & (lt <= hi)
    elif kind == "left_closed_right_open":
        mask = (le >= a) & (le <= hi)
    elif kind == "left_open_right_closed":
        mask = (lt >= a) & (lt <= hi)
    elif kind == "one_sided_upper":
        mask = lt <= hi
    else:
        raise InvalidInput(f"unknown interval kind {kind!r}")
    return float((M * mask).sum())


def exact_coverage_discrete(joint: FinitePmf, a: int, b: int, kind: str) -> float:
    """Exact coverage of [W_(a), W_(B-b)] (in the given kind) under a
    finite joint law of (W_1..W_B, psi(Z)), by full enumeration.

    b = -1 addresses the rank-(B+1) sentinel (no upper constraint);
    a = 0 likewise leaves the lower side unconstrained.
    """
    M, B = _pair_matrix_joint(joint)
    return _coverage_from_matrix(M, B, a, b, kind)


def exact_coverage_continuous_iid(B: int, a: int, b: int, kind: str) -> Fraction:
    """Rank-identity coverage for IID continuous (W_1..W_B, psi).

    The half-open kinds return the almost-sure coverage
    (B - a - b)/(B + 1).  The closed kind returns the inclusive rank
    count (B + 1 - a - b)/(B + 1): the ceiling of the closed-interval
    bracket, which the almost-surely tie-free closed interval attains
    only through the extra 1/(B+1) allowance; it requires a >= 1 so
    both endpoints are genuine order statistics.
    """
    if int(B) != B or B < 1:
        raise InvalidInput("B must be an integer >= 1")
    if not (0 <= a < B - b <= B):
        raise InvalidIndices(f"need 0 <= a < B - b <= B, got a={a}, b={b}, B={B}")
    if kind == "closed":
        if a < 1:
            raise InvalidIndices("closed-kind formula needs a >= 1")
        return Fraction(B + 1 - a - b, B + 1)
    if kind in ("left_closed_right_open", "left_open_right_closed"):
        return Fraction(B - a - b, B + 1)
    raise InvalidInput(f"unsupported kind {kind!r}")


@dataclass(frozen=True)
class GridExample:
    """The deterministic conformal calibration grid R_i = (i - 1/2)/m.

    ``coverage`` is the exact probability that a uniform test score
    falls below the rank-``rank`` calibration score (1.0 when the rank
    exceeds m and the +inf sentinel applies); ``bound`` is the
    guaranteed floor 1 - alpha - 3/(2m).
    """

    m: int
    alpha: float
    rank: int
    coverage: float
    bound: float
    sentinel: bool


def conformal_grid_example(m: int, alpha: float) -> GridExample:
    """Exact coverage of the budget-corrected conformal set on the
    half-spaced calibration grid, with its lower bound."""
    budget = BudgetSpec(B=m, alpha=alpha)
    rule = index_rule(budget, "conformal_mod")
    rank = rule.upper_rank
    sentinel = rank > m
    a = Fraction(alpha).limit_denominator(ALPHA_DENOMINATOR_CAP)
    bound = 1 - a - Fraction(3, 2 * m)
    coverage = Fraction(1) if sentinel else Fraction(2 * rank - 1, 2 * m)
    return GridExample(
        m=m,
        alpha=alpha,
        rank=rank,
        coverage=float(coverage),
        bound=float(bound),
        sentinel=sentinel,
    )


def conformal_grid_sweep(
    m_lo: int = 5,
    m_hi: int = 10_000,
    alphas=(0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5),
) -> SweepReport:
    """Verify coverage >= bound on the calibration grid for every m in
    [m_lo, m_hi] and each alpha, in exact integer arithmetic."""
    if not 1 <= m_lo <= m_hi:
        raise InvalidInput("need 1 <= m_lo <= m_hi")
    violations = []
    n = 0
    for alpha in alphas:
        fr = Fraction(alpha).limit_denominator(ALPHA_DENOMINATOR_CAP)
        num, den = fr.numerator, fr.denominator
        for m in range(m_lo, m_hi + 1):
            n += 1
            rank = m + 1 - (2 * m * num) // (3 * den)
            if rank > m:
                continue  # sentinel: coverage 1 always dominates
            # coverage >= bound <=> (2 rank - 1) den >= 2 m (den - num) - 3 den
            if (2 * rank - 1) * den < 2 * m * (den - num) - 3 * den:
                violations.append({"m": m, "alpha": alpha, "rank": rank})
    return SweepReport(n, tuple(violations), note=f"m in [{m_lo}, {m_hi}]")


def random_cond_iid(rng: np.random.Generator) -> CondIIDInstance:
    """A random finite conditionally-IID instance (<= 5 atoms per
    marginal; psi ties an atom with probability ~0.4)."""
    n_z = int(rng.integers(1, 6))
    n_w = int(rng.integers(1, 6))
    atoms = np.sort(rng.choice(9, size=n_w, replace=False) + 1.0)
    rows = rng.dirichlet(np.ones(n_w), size=n_z)
    snap = rng.random(n_z) < 0.4
    psi = np.where(
        snap,
        atoms[rng.integers(0, n_w, size=n_z)],
        rng.uniform(0.5, 9.5, size=n_z),
    )
    return CondIIDInstance(
        z_probs=tuple(rng.dirichlet(np.ones(n_z))),
        psi_vals=tuple(psi),
        w_atoms=tuple(atoms),
        w_cond=tuple(tuple(r) for r in rows),
    )


def random_cond_indep(rng: np.random.Generator, B: int | None = None) -> CondIndepInstance:
    """A random conditionally independent instance; the per-coordinate
    pmfs are correlated perturbations of one base row so the kappa
    discrepancies stay moderate."""
    if B is None:
        B = int(rng.integers(1, 7))
    n_z = int(rng.integers(1, 6))
    n_w = int(rng.integers(1, 6))
    atoms = np.sort(rng.choice(9, size=n_w, replace=False) + 1.0)
    base = rng.dirichlet(np.ones(n_w), size=n_z)
    cond = []
    for _ in range(B):
        eps = rng.uniform(0.0, 0.3)
        noise = rng.dirichlet(np.ones(n_w), size=n_z)
        mix = (1.0 - eps) * base + eps * noise
        cond.append(tuple(tuple(r) for r in mix))
    snap = rng.random(n_z) < 0.4
    psi = np.where(
        snap,
        atoms[rng.integers(0, n_w, size=n_z)],
        rng.uniform(0.5, 9.5, size=n_z),
    )
    return CondIndepInstance(
        z_probs=tuple(rng.dirichlet(np.ones(n_z))),
        psi_vals=tuple(psi),
        w_atoms=tuple(atoms),
        w_cond=tuple(cond),
    )


def random_joint(rng: np.random.Generator, B: int | None = None) -> FinitePmf:
    """A random finite joint law over (B+1)-tuples; with probability
    ~0.3 (and B <= 3) it is symmetrized over coordinates so the
    exchangeability gap is exactly zero."""
    if B is None:
        B = int(rng.integers(1, 7))
    n_at = int(rng.integers(2, 41))
    vals = rng.integers(1, 7, size=(n_at, B + 1)).astype(float)
    probs = rng.dirichlet(np.ones(n_at))
    acc: dict[tuple, float] = {}
    for row, p in zip(vals, probs):
        key = tuple(row)
        acc[key] = acc.get(key, 0.0) + float(p)
    if B <= 3 and rng.random() < 0.3:
        perms = list(itertools.permutations(range(B + 1)))
        sym: dict[tuple, float] = {}
        share = 1.0 / len(perms)
        for key, p in acc.items():
            for perm in perms:
                k2 = tuple(key[i] for i in perm)
                sym[k2] = sym.get(k2, 0.0) + p * share
        acc = sym
    support = list(acc.keys())
    return FinitePmf(support, [acc[k] for k in support])


def check_cond_iid(inst: CondIIDInstance, B: int, tol: float = _TOL):
    """All (a, b, kind) coverage checks of the conditionally-IID bracket
    with exact slacks; returns (n_checked, violations)."""
    M = _pair_matrix_iid(inst, B)
    delta, delta_tilde = iid_slacks(inst)
    n = 0
    out = []
    for a in range(B):
        for b in range(B - a):
            for kind in _TWO_SIDED_KINDS:
                cov = _coverage_from_matrix(M, B, a, b, kind)
                br = iid_bracket(B, a, b, delta=delta, delta_tilde=delta_tilde, kind=kind)
                n += 1
                if cov < br.lower - tol or cov > br.upper + tol:
                    out.append(
                        {
                            "family": "cond_iid",
                            "B": B,
                            "a": a,
                            "b": b,
                            "kind": kind,
                            "coverage": cov,
                            "lower": br.lower,
                            "upper": br.upper,
                        }
                    )
    return n, out


def check_cond_indep(inst: CondIndepInstance, tol: float = _TOL):
    """Closed-interval checks of the independent-resample bracket and
    the tail-ordering lower bound with exact slacks."""
    B = inst.b
    M = _pair_matrix_indep(inst)
    d_ks, d_tilde, kappas = indep_slacks(inst)
    n = 0
    out = []
    for a in range(B):
        for b in range(B - a):
            cov = _coverage_from_matrix(M, B, a, b, "closed")
            br = independent_bracket(B, a, b, d_tilde, kappas)
            lo3 = ordering_lower(B, a, b, d_ks)
            n += 2
            if cov < br.lower - tol or cov > br.upper + tol:
                out.append(
                    {
                        "family": "cond_indep",
                        "B": B,
                        "a": a,
                        "b": b,
                        "coverage": cov,
                        "lower": br.lower,
                        "upper": br.upper,
                    }
                )
            if cov < lo3 - tol:
                out.append(
                    {
                        "family": "ordering",
                        "B": B,
                        "a": a,
                        "b": b,
                        "coverage": cov,
                        "lower": lo3,
                    }
                )
    return n, out


_DEFAULT_TAIL_PAIRS = ((0.2, 0.2), (0.3, 0.3), (0.5, 0.5), (0.2, 0.5), (0.7, 0.3))


def check_dependent(joint: FinitePmf, pairs=_DEFAULT_TAIL_PAIRS, tol: float = _TOL):
    """Lower-bound checks for arbitrary dependence: exact coverage of
    the two-sided dependent rule must dominate 1 - (gamma+beta)/2 minus
    the exact exchangeability gap."""
    M, B = _pair_matrix_joint(joint)
    gap = gamma_exact(joint).value
    n = 0
    out = []
    for g, bt in pairs:
        try:
            rule = index_rule(BudgetSpec(B=B, alpha=g), "dependent_two_sided", gamma=g, beta=bt)
        except BudgetTooSmall:
            continue
        a = rule.lower_rank
        b = B - rule.upper_rank
        cov = _coverage_from_matrix(M, B, a, b, "closed")
        lower = dependent_bracket(B, g, bt, gap).lower
        n += 1
        if cov < lower - tol:
            out.append(
                {
                    "family": "dependent",
                    "B": B,
                    "gamma": g,
                    "beta": bt,
                    "coverage": cov,
                    "lower": lower,
                    "gap": gap,
                }
            )
    return n, out


def bracket_suite(n_instances: int = 210, seed: int = 20260823) -> SweepReport:
    """Randomized-instance verification of every coverage bracket.

    Cycles through the three instance families (conditionally IID,
    conditionally independent, arbitrary joint), drawing finite
    instances with B <= 6 and at most 5 atoms per marginal, and checks
    exact enumerated coverage against the brackets evaluated with
    exact slack inputs.
    """
    if n_instances < 1:
        raise InvalidInput("n_instances must be >= 1")
    rng = np.random.default_rng(seed)
    checks = 0
    violations: list = []
    for i in range(n_instances):
        fam = i % 3
        if fam == 0:
            B = int(rng.integers(1, 7))
            c, v = check_cond_iid(random_cond_iid(rng), B)
        elif fam == 1:
            c, v = check_cond_indep(random_cond_indep(rng))
        else:
            c, v = check_dependent(random_joint(rng))
        checks += c
        violations.extend(v)
    return SweepReport(
        checks,
        tuple(violations),
        note=f"{n_instances} randomized finite instances, seed {seed}",
    )


def ehm_hoeffding_sweep(b_values=(1, 2, 3, 4, 5, 6), grid=None) -> SweepReport:
    """Exhaustive check of the binomial-approximation TV bound and the
    tail ordering over a full probability grid.

    For every p in grid^B: exact d_TV(PoiBin(p), Bin(B, p_bar)) must
    not exceed the closed-form upper bound, and the tail ordering
    P(PoiBin <= k) <= / >= P(Bin <= k) must hold on its two regimes
    (k <= B p_bar - 1 and k >= B p_bar).
    """
    if grid is None:
        grid = np.arange(1, 10) / 10.0
    grid = np.asarray(grid, dtype=float)
    violations: list = []
    n = 0
    for B in b_values:
        mesh = np.meshgrid(*[grid] * B, indexing="ij")
        combos = np.stack(mesh, axis=-1).reshape(-1, B)
        pmf = poisson_binomial_pmf_batch(combos)
        # the grid is decimal, so 10 * sum is an exact integer key
        sums10 = np.rint(combos.sum(axis=1) * 10).astype(int)
        pbar = sums10 / (10.0 * B)
        qbar = 1.0 - pbar
        het = (combos * (1.0 - combos)).sum(axis=1)
        r = 1.0 - het / (B * pbar * qbar)
        upper = B / (B + 1.0) * (1.0 - pbar ** (B + 1) - qbar ** (B + 1)) * r
        poi_cdf = np.cumsum(pmf, axis=1)
        tv = np.empty(combos.shape[0])
        bin_cdf = np.empty_like(pmf)
        for s10 in np.unique(sums10):
            rows = sums10 == s10
            bpmf = binom_pmf(B, s10 / (10.0 * B)).probs
            tv[rows] = 0.5 * np.abs(pmf[rows] - bpmf).sum(axis=1)
            bin_cdf[rows] = np.cumsum(bpmf)
        k = np.arange(B + 1)
        le_regime = k[None, :] <= (B * pbar - 1.0)[:, None] + 1e-9
        ge_regime = k[None, :] >= (B * pbar)[:, None] - 1e-9
        diff = poi_cdf - bin_cdf
        bad_tv = np.flatnonzero(tv > upper + 1e-12)
        bad_le = np.flatnonzero((le_regime & (diff > 1e-12)).any(axis=1))
        bad_ge = np.flatnonzero((ge_regime & (diff < -1e-12)).any(axis=1))
        for label, idx in (("tv", bad_tv), ("order_le", bad_le), ("order_ge", bad_ge)):
            for row in idx[:20]:
                violations.append({"check": label, "B": B, "p": tuple(combos[row])})
        n += combos.shape[0]
    return SweepReport(n, tuple(violations), note=f"grid size {grid.size}, B in {tuple(b_values)}")
