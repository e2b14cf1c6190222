"""Exact enumeration oracle: slacks, coverages, and the sweep suites."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixedb.distances import FinitePmf, ks_uniform, mod_ks_uniform
from fixedb.errors import InvalidIndices, InvalidInput
from fixedb.oracle import (
    bracket_suite,
    check_cond_iid,
    check_cond_indep,
    check_dependent,
    conformal_grid_example,
    conformal_grid_sweep,
    dist_to_uniform,
    ehm_hoeffding_sweep,
    exact_coverage_continuous_iid,
    exact_coverage_discrete,
    iid_slacks,
    indep_slacks,
    random_cond_iid,
    random_cond_indep,
    random_joint,
)


class TestDistToUniform:
    @given(st.lists(st.floats(0.01, 0.99), min_size=1, max_size=12, unique=True))
    def test_matches_empirical_metrics_on_uniform_weights(self, vals):
        # a discrete law with equal weights has the same jump structure
        # as the empirical CDF of the same points
        probs = np.full(len(vals), 1.0 / len(vals))
        ks, mod = dist_to_uniform(np.array(vals), probs)
        assert ks == pytest.approx(ks_uniform(vals).value, abs=1e-12)
        assert mod == pytest.approx(mod_ks_uniform(vals).value, abs=1e-12)

    def test_point_mass(self):
        ks, mod = dist_to_uniform(np.array([0.5]), np.array([1.0]))
        assert ks == 0.5
        assert mod == 1.0

    def test_degenerate_uniform_limit(self):
        # many equally spaced mid-grid atoms approach the uniform
        n = 1000
        vals = (np.arange(1, n + 1) - 0.5) / n
        ks, mod = dist_to_uniform(vals, np.full(n, 1.0 / n))
        assert ks == pytest.approx(1 / (2 * n), abs=1e-12)
        assert mod == pytest.approx(1 / n, abs=1e-12)


class TestExactCoverageDiscrete:
    def joint_uniform_ranks(self):
        # W = three of {1,2,3,4}, psi the remaining one, all placements
        # equally likely
        support = []
        for psi_rank in range(4):
            vals = [1.0, 2.0, 3.0, 4.0]
            psi = vals.pop(psi_rank)
            support.append((vals[0], vals[1], vals[2], psi))
        return FinitePmf(support, np.full(4, 0.25))

    def test_exchangeable_surrogate_quarter(self):
        # direct enumeration: only psi = 2 lands in [W_(1), W_(2)]
        joint = self.joint_uniform_ranks()
        for kind in ("closed", "left_closed_right_open", "left_open_right_closed"):
            assert exact_coverage_discrete(joint, 1, 1, kind) == pytest.approx(0.25)

    def test_iid_atoms_hand_count(self):
        # B = 2 IID uniform on {1,2,3}, psi = 2:
        # [W_(1), W_(2)] misses only (1,1) and (3,3) -> 7/9
        support = [(float(i), float(j), 2.0) for i in (1, 2, 3) for j in (1, 2, 3)]
        joint = FinitePmf(support, np.full(9, 1.0 / 9))
        assert exact_coverage_discrete(joint, 1, 0, "closed") == pytest.approx(7 / 9)
        # [W_(1), W_(2)) holds 2 iff exactly one W_i <= 2:
        # {(1,3),(3,1),(2,3),(3,2)} -> 4/9
        assert exact_coverage_discrete(joint, 1, 0, "left_closed_right_open") == pytest.approx(4 / 9)

    def test_one_sided(self):
        support = [(float(i), 1.5) for i in (1, 2)]
        joint = FinitePmf(support, np.array([0.5, 0.5]))
        # psi < W_(1) only when W = 2: coverage of (-inf, W_(1)] ... the
        # one-sided set {psi < W_(B-b)} with b = 0 keeps W = 2 only
        assert exact_coverage_discrete(joint, 0, 0, "one_sided_upper") == pytest.approx(0.5)

    def test_invalid_indices(self):
        joint = self.joint_uniform_ranks()
        with pytest.raises(InvalidIndices):
            exact_coverage_discrete(joint, 3, 1, "closed")


class TestExactCoverageContinuous:
    def test_frozen_values(self):
        assert exact_coverage_continuous_iid(19, 1, 1, "closed") == Fraction(18, 20)
        assert exact_coverage_continuous_iid(19, 1, 1, "left_closed_right_open") == Fraction(17, 20)
        assert exact_coverage_continuous_iid(19, 1, 1, "left_open_right_closed") == Fraction(17, 20)
        assert exact_coverage_continuous_iid(39, 2, 2, "left_closed_right_open") == Fraction(35, 40)
        assert exact_coverage_continuous_iid(99, 5, 4, "left_closed_right_open") == Fraction(9, 10)

    def test_closed_requires_positive_a(self):
        with pytest.raises((InvalidInput, InvalidIndices)):
            exact_coverage_continuous_iid(19, 0, 1, "closed")

    @given(
        st.integers(1, 40),
        st.integers(0, 5),
        st.integers(0, 5),
    )
    def test_half_open_matches_rank_count(self, B, a, b):
        if a + b >= B:
            return
        val = exact_coverage_continuous_iid(B, a, b, "left_closed_right_open")
        assert val == Fraction(B - a - b, B + 1)


class TestInstanceChecks:
    def test_iid_slacks_bound_membership(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            inst = random_cond_iid(rng)
            delta, delta_tilde = iid_slacks(inst)
            assert 0.0 <= delta <= 1.0 and 0.0 <= delta_tilde <= 1.0
            n, viol = check_cond_iid(inst, B=3, tol=1e-9)
            assert viol == []
            assert n > 0

    def test_indep_slacks_and_bracket(self):
        rng = np.random.default_rng(3)
        for _ in range(6):
            inst = random_cond_indep(rng)
            d_ks, d_tilde, kappas = indep_slacks(inst)
            assert len(kappas) == inst.b
            assert all(0.0 <= k <= 1.0 for k in kappas)
            n, viol = check_cond_indep(inst, tol=1e-9)
            assert viol == []

    def test_dependent_check(self):
        rng = np.random.default_rng(4)
        for _ in range(6):
            joint = random_joint(rng)
            n, viol = check_dependent(joint, tol=1e-9)
            assert viol == []

    def test_bracket_suite(self):
        rep = bracket_suite(n_instances=45, seed=1)
        assert rep.passed
        assert rep.violations == ()
        assert rep.n_checked > 100


class TestConformalGrid:
    def test_frozen_examples(self):
        ex = conformal_grid_example(100, 0.1)
        assert (ex.rank, ex.sentinel) == (95, False)
        assert ex.coverage == pytest.approx(0.945, abs=1e-12)
        assert ex.bound == pytest.approx(0.885, abs=1e-12)
        ex2 = conformal_grid_example(10, 0.3)
        assert (ex2.rank, ex2.coverage, ex2.bound) == (9, 0.85, 0.55)
        ex3 = conformal_grid_example(5, 0.1)
        assert ex3.sentinel and ex3.coverage == 1.0

    def test_sweep_consistent_with_examples(self):
        sweep = conformal_grid_sweep(m_lo=5, m_hi=400)
        assert sweep.passed
        rng = np.random.default_rng(0)
        for _ in range(30):
            m = int(rng.integers(5, 400))
            alpha = float(rng.choice([0.05, 0.1, 0.2, 0.3, 0.5]))
            ex = conformal_grid_example(m, alpha)
            assert ex.coverage >= ex.bound - 1e-12

    def test_full_sweep(self):
        assert conformal_grid_sweep().passed


def test_ehm_hoeffding_small_sweep():
    rep = ehm_hoeffding_sweep(b_values=(1, 2, 3))
    assert rep.passed
    assert rep.n_checked > 0
