import math

import numpy as np
import pytest
from scipy import stats

from znsparse import (ExperimentConfig, bernoulli_frequency_sample,
                      exact_kernel_flatness_probability,
                      kernel_flatness_failure_bound,
                      mc_kernel_flatness_probability, mc_recovery_probability,
                      omega_concentration_check)
from znsparse.harness import flatness_sample_threshold, recovery_sample_threshold
from znsparse.rng import SplitMix64, derive_seed


def test_bernoulli_sample_edges():
    stream = SplitMix64(0)
    assert len(bernoulli_frequency_sample(0.0, 32, stream)) == 0
    assert len(bernoulli_frequency_sample(1.0, 32, stream)) == 32


def test_bernoulli_sample_binomial_mean():
    n, tau, reps = 64, 0.4, 1000
    sizes = [len(bernoulli_frequency_sample(tau, n, SplitMix64(derive_seed(4, i))))
             for i in range(reps)]
    assert abs(np.mean(sizes) - n * tau) <= 3 * math.sqrt(n * tau * (1 - tau) / reps)


def test_concentration_lambda_zero_is_vacuous():
    rep = omega_concentration_check(0.5, 64, trials=50, lam=0.0, seed=1)
    assert rep.theoretical_bound == 2.0
    assert rep.bound_satisfied
    assert rep.empirical_p > 0.8


def test_concentration_tau_zero():
    rep = omega_concentration_check(0.0, 64, trials=50, lam=1.0, seed=2)
    assert rep.success_count == 0
    assert rep.theoretical_bound == 0.0
    assert rep.bound_satisfied


def test_concentration_exact_binomial_cross_check():
    n, tau, lam, trials = 64, 0.3, 3.0, 2000
    rep = omega_concentration_check(tau, n, trials=trials, lam=lam, seed=3)
    thr = lam * math.sqrt(math.log(n))
    k = np.arange(n + 1)
    pmf = stats.binom.pmf(k, n, tau)
    exact = float(pmf[np.abs(k - tau * n) > thr].sum())
    se = math.sqrt(exact * (1 - exact) / trials)
    assert abs(rep.empirical_p - exact) <= 4 * se + 1e-12


def test_concentration_paper_scale_example():
    n = 1024
    tau = 40 * math.log(n) / n
    rep = omega_concentration_check(tau, n, trials=400, lam=20.0, seed=4)
    p_hat = rep.empirical_p
    se = math.sqrt(max(p_hat * (1 - p_hat), 0) / rep.trials)
    assert p_hat <= rep.theoretical_bound + 3 * se
    assert rep.bound_satisfied


def test_log_factor_cannot_be_dropped():
    # documented regression: replacing the sqrt(log N) deviation scale by 1
    # while keeping the quoted bound value is empirically violated
    n, tau, lam, trials = 1024, 0.2, 20.0, 2000
    exceed = 0
    for trial in range(trials):
        stream = SplitMix64(derive_seed(5, trial))
        size = int(np.count_nonzero(stream.bernoulli_mask(tau, n)))
        exceed += abs(size - tau * n) > lam  # no sqrt(log n) factor
    p_hat = exceed / trials
    bound = 2.0 * math.exp(-((lam * math.log(n)) ** 2) / (4 * n * tau))
    se = math.sqrt(p_hat * (1 - p_hat) / trials)
    assert p_hat > bound + 3 * se


def test_flatness_bound_formula_vacuous_at_desk_scale():
    bound, bound_nc = kernel_flatness_failure_bound(101, 3, 8, tau_n=203.0)
    a = math.cos(math.pi / 8)
    expected = 101 * 8 * math.exp(-203.0 * (a * a / 38.0 - 2.0 / 27.0))
    assert bound == pytest.approx(expected, rel=1e-12)
    assert bound > 1.0  # reported even when vacuous
    assert bound_nc <= bound
    threshold = flatness_sample_threshold(101, 3, 0.1)
    assert threshold == pytest.approx(4 * 1.1 * 10 * math.log(101))
    assert threshold > 101  # the sample-size requirement exceeds N here


def test_mc_flatness_tau_one_never_fails():
    cfg = ExperimentConfig(n=32, t_sparsity=2, trials=20, master_seed=6, tau=1.0)
    rep = mc_kernel_flatness_probability(cfg)
    assert rep.success_count == 0
    assert rep.bound_satisfied
    assert rep.extras["threshold_vacuous"] == (
        flatness_sample_threshold(32, 2, 0.1) > 32)


def test_mc_flatness_bound_consistency_small_grid():
    for n, t, tau in ((64, 2, 0.4), (101, 3, 0.6)):
        cfg = ExperimentConfig(n=n, t_sparsity=t, trials=100, master_seed=7, tau=tau)
        rep = mc_kernel_flatness_probability(cfg)
        se = math.sqrt(max(rep.empirical_p * (1 - rep.empirical_p), 0) / rep.trials)
        assert rep.empirical_p <= rep.theoretical_bound + 3 * se
        assert rep.extras["bound_without_cubic"] <= rep.theoretical_bound


def test_mc_recovery_full_sampling():
    cfg = ExperimentConfig(n=16, t_sparsity=2, trials=15, master_seed=8,
                           omega_size=16)
    rep = mc_recovery_probability(cfg)
    assert rep.success_count == 15


def test_mc_recovery_underdetermined_always_fails():
    cfg = ExperimentConfig(n=16, t_sparsity=2, trials=25, master_seed=9,
                           omega_size=1)
    rep = mc_recovery_probability(cfg)
    assert rep.success_count == 0


def test_mc_recovery_monotone_in_sample_size():
    counts = []
    for omega_size in (4, 16, 48):
        cfg = ExperimentConfig(n=127, t_sparsity=1, trials=30, master_seed=10,
                               omega_size=omega_size)
        counts.append(mc_recovery_probability(cfg).success_count)
    assert counts[0] <= counts[1] <= counts[2]
    assert counts[2] == 30


def test_mc_recovery_reports_thresholds():
    cfg = ExperimentConfig(n=127, t_sparsity=4, trials=5, master_seed=11,
                           omega_size=60, delta=0.1, m_exponent=1.0)
    rep = mc_recovery_probability(cfg)
    assert rep.theoretical_bound == pytest.approx(
        recovery_sample_threshold(127, 4, 0.1))
    assert rep.extras["recovery_sample_threshold_alt23"] == pytest.approx(
        23.0 * 2.0 * 4 * math.log(127))
    assert rep.extras["threshold_vacuous"] == (rep.theoretical_bound > 127)
    assert "c_empirical" in rep.extras


def test_exact_flatness_probability_edges():
    # the full set's kernel is flat at any sparsity, so tau=1 gives 1
    assert exact_kernel_flatness_probability(8, 2, 1.0) == pytest.approx(1.0)
    # tau=0 only produces the empty set, which fails
    assert exact_kernel_flatness_probability(8, 2, 0.0) == 0.0


def test_exact_flatness_probability_matches_mc():
    n, t, tau = 8, 2, 0.7
    exact = exact_kernel_flatness_probability(n, t, tau)
    cfg = ExperimentConfig(n=n, t_sparsity=t, trials=400, master_seed=12, tau=tau)
    rep = mc_kernel_flatness_probability(cfg)
    mc_holds = 1.0 - rep.empirical_p
    se = math.sqrt(max(exact * (1 - exact), 1e-12) / rep.trials)
    assert abs(mc_holds - exact) <= 4 * se


def test_exact_flatness_probability_weights_sum():
    # the hold/fail split partitions the Bernoulli measure
    n, t, tau = 6, 1, 0.35
    p_hold = exact_kernel_flatness_probability(n, t, tau)
    assert 0.0 <= p_hold <= 1.0
    from znsparse.solver import InstanceTooLarge
    with pytest.raises(InstanceTooLarge):
        exact_kernel_flatness_probability(17, 1, 0.5)


def test_experiment_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(n=8, t_sparsity=1, trials=1, master_seed=0)
    with pytest.raises(ValueError):
        ExperimentConfig(n=8, t_sparsity=1, trials=1, master_seed=0,
                         tau=0.5, omega_size=4)
    with pytest.raises(ValueError):
        ExperimentConfig(n=8, t_sparsity=1, trials=1, master_seed=0,
                         tau=0.5, n_phases=2)


def test_reports_are_deterministic():
    cfg = ExperimentConfig(n=32, t_sparsity=2, trials=25, master_seed=13, tau=0.6)
    a = mc_kernel_flatness_probability(cfg)
    b = mc_kernel_flatness_probability(cfg)
    assert a == b
